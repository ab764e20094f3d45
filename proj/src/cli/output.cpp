#include "strat/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "strat/cli/config.hpp"

namespace strat::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

namespace {

std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string& s) const { return csv_escape(s); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            if (std::isfinite(v)) return v;
            return format_double(v);
        }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
    };
    return std::visit(Visitor{}, c);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

void finish(std::ofstream& f, const std::string& path) {
    f.flush();
    if (!f) throw IoError("error while writing '" + path + "'");
}

}  // namespace

void write_csv_table(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

std::string aux_path(const std::string& path, const std::string& name) {
    const std::filesystem::path p(path);
    std::filesystem::path out = p.parent_path() / (p.stem().string() + "." + name + p.extension().string());
    return out.string();
}

void write_csv(const Document& doc, const std::string& path, std::ostream& os) {
    if (path.empty()) {
        for (std::size_t i = 0; i < doc.tables.size(); ++i) {
            if (i) os << '\n';
            os << "# table: " << doc.tables[i].name << '\n';
            write_csv_table(os, doc.tables[i]);
        }
        return;
    }
    for (std::size_t i = 0; i < doc.tables.size(); ++i) {
        const std::string target = i == 0 ? path : aux_path(path, doc.tables[i].name);
        auto f = open_out(target);
        write_csv_table(f, doc.tables[i]);
        finish(f, target);
    }
}

void write_json(const Document& doc, const std::string& path, std::ostream& os) {
    nlohmann::ordered_json j;
    j["metadata"] = doc.metadata;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto& t : doc.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : t.rows) {
            nlohmann::ordered_json row = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < r.size() && i < t.columns.size(); ++i) row[t.columns[i]] = cell_json(r[i]);
            rows.push_back(std::move(row));
        }
        tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
    }
    j["tables"] = std::move(tables);
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        os << text;
        return;
    }
    auto f = open_out(path);
    f << text;
    finish(f, path);
}

std::vector<std::string> output_files(const Document& doc, const std::string& path, const std::string& format) {
    if (path.empty()) return {};
    if (format == "json") return {path};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < doc.tables.size(); ++i) {
        out.push_back(i == 0 ? path : aux_path(path, doc.tables[i].name));
    }
    return out;
}

}  // namespace strat::cli
