#include "hublab/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hublab/error.hpp"

namespace hublab {

namespace {

using json = nlohmann::json;

std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    return out;
}

// Next non-empty line with comments stripped; false at end of input.
bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno)
{
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            return true;
    }
    return false;
}

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& what)
{
    throw ParseError("line " + std::to_string(lineno) + ": " + what);
}

} // namespace

WeightedGraph read_graph(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    if (!next_content_line(in, line, lineno))
        throw ParseError("empty graph file");
    std::istringstream hdr(line);
    long long n = -1, m = -1;
    if (!(hdr >> n >> m) || n < 0 || m < 0)
        parse_fail(lineno, "expected header 'n m'");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_content_line(in, line, lineno))
            throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        std::istringstream es(line);
        long long u, v, w;
        std::string extra;
        if (!(es >> u >> v >> w) || (es >> extra))
            parse_fail(lineno, "expected 'u v w'");
        if (u < 0 || v < 0 || u >= n || v >= n || w < 0)
            parse_fail(lineno, "edge out of range");
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), static_cast<Dist>(w)});
    }
    if (next_content_line(in, line, lineno))
        parse_fail(lineno, "trailing content after the declared edges");
    try {
        return WeightedGraph(static_cast<std::size_t>(n), std::move(edges));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

WeightedGraph read_graph_file(const std::string& path)
{
    auto in = open_in(path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const WeightedGraph& g)
{
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (const Edge& e : g.edges())
        out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

void write_graph_file(const std::string& path, const WeightedGraph& g)
{
    auto out = open_out(path);
    write_graph(out, g);
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

HubLabeling read_labels(std::istream& in)
{
    std::vector<std::vector<HubEntry>> sets;
    std::vector<std::uint8_t> present;
    std::string line;
    std::size_t lineno = 0;
    while (next_content_line(in, line, lineno)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            parse_fail(lineno, "expected 'v: (h,d) ...'");
        long long v = -1;
        {
            std::istringstream vs(line.substr(0, colon));
            std::string extra;
            if (!(vs >> v) || v < 0 || (vs >> extra))
                parse_fail(lineno, "bad vertex id");
        }
        const auto vi = static_cast<std::size_t>(v);
        if (vi >= sets.size()) {
            sets.resize(vi + 1);
            present.resize(vi + 1, 0);
        }
        if (present[vi])
            parse_fail(lineno, "vertex listed twice");
        present[vi] = 1;
        std::size_t pos = colon + 1;
        while (true) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos)
                break;
            if (line[pos] != '(')
                parse_fail(lineno, "expected '('");
            const auto close = line.find(')', pos);
            if (close == std::string::npos)
                parse_fail(lineno, "unterminated hub entry");
            std::string body = line.substr(pos + 1, close - pos - 1);
            const auto comma = body.find(',');
            if (comma == std::string::npos)
                parse_fail(lineno, "hub entry needs 'h,d'");
            body[comma] = ' ';
            std::istringstream es(body);
            long long h, d;
            std::string extra;
            if (!(es >> h >> d) || h < 0 || d < 0 || (es >> extra))
                parse_fail(lineno, "bad hub entry");
            sets[vi].push_back({static_cast<Vertex>(h), static_cast<Dist>(d)});
            pos = close + 1;
        }
    }
    for (std::size_t v = 0; v < present.size(); ++v)
        if (!present[v])
            throw ParseError("label file has no line for vertex " + std::to_string(v));
    try {
        return HubLabeling(std::move(sets));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

HubLabeling read_labels_file(const std::string& path)
{
    auto in = open_in(path);
    return read_labels(in);
}

void write_labels(std::ostream& out, const HubLabeling& hl)
{
    for (Vertex v = 0; v < hl.num_vertices(); ++v) {
        out << v << ':';
        for (const auto& e : hl.hubs(v))
            out << " (" << e.hub << ',' << e.dist << ')';
        out << '\n';
    }
}

void write_labels_file(const std::string& path, const HubLabeling& hl)
{
    auto out = open_out(path);
    write_labels(out, hl);
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

std::string family_metadata(const FamilyInstance& inst)
{
    json j;
    j["schema"] = 1;
    j["kind"] = to_string(inst.kind);
    j["b"] = inst.params.b;
    j["ell"] = inst.params.ell;
    j["s"] = inst.params.side();
    j["A"] = inst.params.base_weight();
    j["num_vertices"] = inst.graph.num_vertices();
    j["num_edges"] = inst.graph.num_edges();
    j["coord_order"] = "mixed-radix, coordinate 1 least significant";
    json ids = json::array();
    for (Vertex v : inst.level_ids)
        ids.push_back(v == kNoVertex ? -1 : static_cast<long long>(v));
    j["level_ids"] = std::move(ids);
    j["removed"] = inst.removed;
    std::string roles;
    roles.reserve(inst.roles.size());
    for (auto r : inst.roles)
        roles.push_back(role_code(r));
    j["roles"] = std::move(roles);
    return j.dump(1) + "\n";
}

void write_family_files(const std::string& graph_path, const std::string& meta_path, const FamilyInstance& inst)
{
    write_graph_file(graph_path, inst.graph);
    auto out = open_out(meta_path);
    out << family_metadata(inst);
    if (!out)
        throw IoError("write failed for '" + meta_path + "'");
}

FamilyInstance read_family_files(const std::string& graph_path, const std::string& meta_path)
{
    FamilyInstance inst;
    inst.graph = read_graph_file(graph_path);
    auto in = open_in(meta_path);
    json j;
    try {
        in >> j;
        if (j.at("schema").get<int>() != 1)
            throw ParseError("unsupported metadata schema");
        inst.kind = parse_family_kind(j.at("kind").get<std::string>());
        inst.params = {j.at("b").get<unsigned>(), j.at("ell").get<unsigned>()};
        inst.params.validate();
        for (const auto& id : j.at("level_ids")) {
            const long long v = id.get<long long>();
            if (v >= static_cast<long long>(inst.graph.num_vertices()))
                throw ParseError("level id out of range");
            inst.level_ids.push_back(v < 0 ? kNoVertex : static_cast<Vertex>(v));
        }
        inst.removed = j.at("removed").get<std::vector<std::vector<unsigned>>>();
        for (char c : j.at("roles").get<std::string>())
            inst.roles.push_back(parse_role_code(c));
    } catch (const json::exception& e) {
        throw ParseError(std::string("metadata: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("metadata: ") + e.what());
    }
    if (inst.level_ids.size() != inst.params.level_size() * inst.params.num_levels())
        throw ParseError("metadata level_ids has wrong length");
    if (inst.roles.size() != inst.graph.num_vertices())
        throw ParseError("metadata roles length does not match the graph");
    return inst;
}

std::vector<std::vector<unsigned>> read_coord_list_file(const std::string& path, unsigned dim)
{
    auto in = open_in(path);
    std::vector<std::vector<unsigned>> out;
    std::string line;
    std::size_t lineno = 0;
    while (next_content_line(in, line, lineno)) {
        for (char& c : line)
            if (c == ',' || c == '(' || c == ')')
                c = ' ';
        std::istringstream ls(line);
        std::vector<unsigned> coords;
        long long x;
        while (ls >> x) {
            if (x < 0)
                parse_fail(lineno, "negative coordinate");
            coords.push_back(static_cast<unsigned>(x));
        }
        if (!ls.eof())
            parse_fail(lineno, "non-numeric coordinate");
        if (coords.size() != dim)
            parse_fail(lineno, "expected " + std::to_string(dim) + " coordinates");
        out.push_back(std::move(coords));
    }
    return out;
}

} // namespace hublab
