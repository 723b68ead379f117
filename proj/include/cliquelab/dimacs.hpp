#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "graph.hpp"

namespace cliquelab {

struct DimacsParseError : std::runtime_error {
    explicit DimacsParseError(int line, const std::string& what)
        : std::runtime_error("dimacs parse error at line " +
                             std::to_string(line) + ": " + what),
          line_number(line) {}
    int line_number;
};

// DIMACS ascii clique format: one "p edge N M" header, M lines "e u v",
// vertices 1-indexed. Self loops and duplicate edges are rejected.
inline Graph read_dimacs(std::istream& in) {
    bool got_header = false;
    std::uint32_t n = 0;
    std::uint64_t declared_edges = 0, read_edges = 0;
    GraphBuilder* builder = nullptr;
    std::unique_ptr<GraphBuilder> holder;
    int ln = 0;
    for (std::string line; std::getline(in, line);) {
        ++ln;
        if (line.empty() || line[0] == 'c' || line[0] == '\r') continue;
        std::istringstream iss(line);
        std::string tag;
        iss >> tag;
        if (tag == "p") {
            if (got_header) throw DimacsParseError(ln, "duplicate header");
            std::string fmt;
            std::uint64_t nn = 0;
            iss >> fmt >> nn >> declared_edges;
            if (!iss || (fmt != "edge" && fmt != "edges" && fmt != "col"))
                throw DimacsParseError(ln, "malformed header");
            if (nn == 0) throw DimacsParseError(ln, "graph order must be >= 1");
            n = std::uint32_t(nn);
            holder = std::make_unique<GraphBuilder>(n, /*allow_large=*/true);
            builder = holder.get();
            got_header = true;
        } else if (tag == "e") {
            if (!got_header)
                throw DimacsParseError(ln, "edge before header");
            std::uint64_t u = 0, v = 0;
            iss >> u >> v;
            if (!iss) throw DimacsParseError(ln, "malformed edge line");
            if (u < 1 || v < 1 || u > n || v > n)
                throw DimacsParseError(ln, "vertex id out of range");
            if (u == v) throw DimacsParseError(ln, "self loop");
            const Vertex a = Vertex(u - 1), b = Vertex(v - 1);
            if (builder->has_edge(a, b))
                throw DimacsParseError(ln, "duplicate edge");
            builder->set_edge(a, b);
            ++read_edges;
        } else {
            throw DimacsParseError(ln, "unrecognized line type '" + tag + "'");
        }
    }
    if (!got_header) throw DimacsParseError(ln, "missing header");
    if (read_edges != declared_edges)
        throw DimacsParseError(
            ln, "header declares " + std::to_string(declared_edges) +
                    " edges but " + std::to_string(read_edges) + " were read");
    return std::move(*holder).build();
}

inline Graph read_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_dimacs(in);
}

inline void write_dimacs(const Graph& g, std::ostream& out) {
    out << "p edge " << g.order() << " " << g.edge_count() << "\n";
    for (Vertex i = 0; i < g.order(); ++i)
        for (Vertex j = i + 1; j < g.order(); ++j)
            if (g.has_edge(i, j))
                out << "e " << (i + 1) << " " << (j + 1) << "\n";
}

inline void write_dimacs(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_dimacs(g, out);
}

// Sidecar document recording a hidden-clique insertion:
// {method, k_hc, vertices, seed}
inline nlohmann::json plant_spec_to_json(const PlantSpec& spec) {
    return nlohmann::json{
        {"method", spec.method == PlantMethod::naive ? "naive"
                                                     : "degree-preserving"},
        {"k_hc", spec.k_hc},
        {"vertices", spec.vertices},
        {"seed", spec.base_seed}};
}

inline PlantSpec plant_spec_from_json(const nlohmann::json& j,
                                      std::uint32_t graph_order) {
    PlantSpec spec;
    const std::string method = j.at("method").get<std::string>();
    if (method == "naive")
        spec.method = PlantMethod::naive;
    else if (method == "degree-preserving")
        spec.method = PlantMethod::degree_preserving;
    else
        throw std::invalid_argument("unknown plant method '" + method + "'");
    spec.k_hc = j.at("k_hc").get<std::uint32_t>();
    spec.vertices = j.at("vertices").get<VertexList>();
    spec.base_seed = j.at("seed").get<std::uint64_t>();
    spec.alpha = double(spec.k_hc) / std::sqrt(double(graph_order));
    return spec;
}

inline void write_plant_spec(const PlantSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << plant_spec_to_json(spec).dump(2) << "\n";
}

inline PlantSpec read_plant_spec(const std::string& path,
                                 std::uint32_t graph_order) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return plant_spec_from_json(j, graph_order);
}

} // namespace cliquelab
