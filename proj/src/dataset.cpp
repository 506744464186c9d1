#include "narrowcap/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace narrowcap {

Vec LabeledDataset::classes() const {
    Vec c = targets;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

namespace {

// Shortest round-trip decimal for a double.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::vector<Vec> parse_csv_rows(const std::string& text) {
    std::vector<Vec> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Vec row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const std::string cell = line.substr(pos, comma - pos);
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size() && cell.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw std::runtime_error("CSV parse error at line " + std::to_string(lineno) +
                                         ": bad number '" + cell + "'");
            }
            pos = comma + 1;
            if (comma == line.size()) break;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("CSV parse error at line " + std::to_string(lineno) +
                                     ": inconsistent column count");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string cloud_to_csv(const PointCloud& cloud) {
    std::string out;
    for (const auto& p : cloud.points) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j) out += ',';
            out += format_double(p[j]);
        }
        out += '\n';
    }
    return out;
}

PointCloud cloud_from_csv(const std::string& text) {
    std::vector<Vec> rows = parse_csv_rows(text);
    if (rows.empty()) throw std::runtime_error("CSV contains no points");
    const std::size_t dim = rows.front().size();
    return PointCloud(dim, std::move(rows));
}

std::string cloud_to_json(const PointCloud& cloud) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : cloud.points) arr.push_back(p);
    return arr.dump();
}

PointCloud cloud_from_json(const std::string& text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("cloud JSON parse error: ") + e.what());
    }
    if (!arr.is_array() || arr.empty())
        throw std::runtime_error("cloud JSON must be a non-empty array of arrays");
    std::vector<Vec> rows;
    for (const auto& p : arr) {
        if (!p.is_array()) throw std::runtime_error("cloud JSON must be an array of arrays");
        rows.push_back(p.get<Vec>());
    }
    const std::size_t dim = rows.front().size();
    return PointCloud(dim, std::move(rows));
}

std::string dataset_to_csv(const LabeledDataset& data) {
    if (data.targets.size() != data.points.size())
        throw std::invalid_argument("dataset: targets/points size mismatch");
    std::string out;
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        for (double v : data.points.points[i]) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(data.targets[i]);
        out += '\n';
    }
    return out;
}

LabeledDataset dataset_from_csv(const std::string& text) {
    std::vector<Vec> rows = parse_csv_rows(text);
    if (rows.empty()) throw std::runtime_error("CSV contains no rows");
    if (rows.front().size() < 2)
        throw std::runtime_error("dataset CSV needs at least one coordinate plus a target column");
    LabeledDataset data;
    data.points.dim = rows.front().size() - 1;
    for (auto& row : rows) {
        data.targets.push_back(row.back());
        row.pop_back();
        data.points.points.push_back(std::move(row));
    }
    return data;
}

Vec values_from_csv(const std::string& text) {
    std::vector<Vec> rows = parse_csv_rows(text);
    Vec out;
    for (const auto& row : rows) {
        if (row.size() != 1) throw std::runtime_error("values CSV must have one column");
        out.push_back(row[0]);
    }
    return out;
}

std::string values_to_csv(const Vec& values) {
    std::string out;
    for (double v : values) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace narrowcap
