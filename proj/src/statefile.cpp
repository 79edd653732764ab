#include "csent/statefile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csent/errors.hpp"

namespace csent {

namespace {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

std::string serialize_state(const MultipartiteState& s,
                            const std::optional<StateFileMeta>& meta) {
    std::ostringstream out;
    out << "{\n  \"version\": 1,\n  \"layout\": [";
    for (int i = 0; i < s.layout.size(); ++i) {
        const auto& f = s.layout.factors[i];
        if (i) out << ", ";
        out << "{\"label\": \"" << f.label << "\", \"dim\": " << f.dim << ", \"party\": \""
            << party_char(f.party) << "\"}";
    }
    out << "],\n  \"matrix\": [\n";
    for (long r = 0; r < s.rho.rows(); ++r) {
        out << "    [";
        for (long c = 0; c < s.rho.cols(); ++c) {
            if (c) out << ", ";
            out << "[" << format_double(s.rho(r, c).real()) << ", "
                << format_double(s.rho(r, c).imag()) << "]";
        }
        out << "]" << (r + 1 < s.rho.rows() ? "," : "") << "\n";
    }
    out << "  ]";
    if (meta) {
        out << ",\n  \"metadata\": {\"family\": \"" << meta->family << "\", \"params\": {";
        bool first = true;
        for (const auto& [k, v] : meta->params) {
            if (!first) out << ", ";
            first = false;
            out << "\"" << k << "\": " << format_double(v);
        }
        out << "}}";
    }
    out << "\n}\n";
    return out.str();
}

MultipartiteState parse_state(const std::string& text,
                              std::optional<StateFileMeta>* meta) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("state file: ") + e.what());
    }

    auto fail = [](const std::string& msg) -> ParseError {
        return ParseError("state file: " + msg);
    };

    if (!j.is_object()) throw fail("top level must be an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "version" && key != "layout" && key != "matrix" && key != "metadata")
            throw fail("unknown field '" + key + "'");
    }
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw fail("missing integer field 'version'");
    if (j["version"].get<int>() != 1)
        throw fail("unsupported version " + std::to_string(j["version"].get<int>()));
    if (!j.contains("layout") || !j["layout"].is_array() || j["layout"].empty())
        throw fail("missing non-empty array field 'layout'");
    if (!j.contains("matrix") || !j["matrix"].is_array())
        throw fail("missing array field 'matrix'");

    SubsystemLayout layout;
    for (const auto& f : j["layout"]) {
        if (!f.is_object() || !f.contains("label") || !f.contains("dim") || !f.contains("party"))
            throw fail("layout entries need label/dim/party");
        for (const auto& [key, _] : f.items())
            if (key != "label" && key != "dim" && key != "party")
                throw fail("unknown layout field '" + key + "'");
        std::string party = f["party"].get<std::string>();
        if (party != "A" && party != "B") throw fail("party must be 'A' or 'B'");
        layout.factors.push_back(Factor{f["label"].get<std::string>(), f["dim"].get<int>(),
                                        party == "A" ? Party::A : Party::B});
    }

    const long d = layout.dim();
    if (static_cast<long>(j["matrix"].size()) != d)
        throw fail("matrix has " + std::to_string(j["matrix"].size()) + " rows, layout needs " +
                   std::to_string(d));
    Mat rho(d, d);
    for (long r = 0; r < d; ++r) {
        const auto& row = j["matrix"][r];
        if (!row.is_array() || static_cast<long>(row.size()) != d)
            throw fail("matrix row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(d));
        for (long c = 0; c < d; ++c) {
            const auto& e = row[c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw fail("matrix entry (" + std::to_string(r) + "," + std::to_string(c) +
                           ") must be an [re, im] pair");
            rho(r, c) = cxd(e[0].get<double>(), e[1].get<double>());
        }
    }

    if (meta) {
        meta->reset();
        if (j.contains("metadata")) {
            const auto& m = j["metadata"];
            if (!m.is_object()) throw fail("metadata must be an object");
            for (const auto& [key, _] : m.items())
                if (key != "family" && key != "params")
                    throw fail("unknown metadata field '" + key + "'");
            StateFileMeta sm;
            if (m.contains("family")) sm.family = m["family"].get<std::string>();
            if (m.contains("params"))
                for (const auto& [k, v] : m["params"].items()) sm.params[k] = v.get<double>();
            *meta = sm;
        }
    }

    MultipartiteState s{std::move(rho), std::move(layout)};
    s.validate();  // throws ValidationError naming the violated invariant
    return s;
}

void write_state_file(const std::string& path, const MultipartiteState& s,
                      const std::optional<StateFileMeta>& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << serialize_state(s, meta);
}

MultipartiteState read_state_file(const std::string& path,
                                  std::optional<StateFileMeta>* meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_state(ss.str(), meta);
}

} // namespace csent
