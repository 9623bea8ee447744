#include "regionlab/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "regionlab/error.hpp"

namespace regionlab {

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
    row(header);
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& fields) {
    require(fields.size() == columns_, "csv: row has " + std::to_string(fields.size()) +
                                           " fields, header has " + std::to_string(columns_));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) text_ += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n\r") == std::string::npos) {
            text_ += f;
        } else {
            text_ += '"';
            for (char c : f) {
                if (c == '"') text_ += '"';
                text_ += c;
            }
            text_ += '"';
        }
    }
    text_ += '\n';
    return *this;
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_double(v));
    return row(fields);
}

std::string field_to_csv(const FieldMap& map) {
    std::string out = "x,y,value\n";
    out.reserve(out.size() + map.values.size() * 60);
    for (std::size_t j = 0; j < map.spec.ny; ++j)
        for (std::size_t i = 0; i < map.spec.nx; ++i) {
            out += format_double(map.spec.x(i));
            out += ',';
            out += format_double(map.spec.y(j));
            out += ',';
            out += format_double(map.at(i, j));
            out += '\n';
        }
    return out;
}

std::string field_to_pgm(const FieldMap& map) {
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *lo_it, hi = *hi_it;
    std::string out = "P5\n" + std::to_string(map.spec.nx) + " " + std::to_string(map.spec.ny) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + map.spec.size());
    for (std::size_t r = 0; r < map.spec.ny; ++r) {
        const std::size_t j = map.spec.ny - 1 - r;
        for (std::size_t i = 0; i < map.spec.nx; ++i) {
            const double v = map.at(i, j);
            const long level = hi > lo ? std::lround(255.0 * (v - lo) / (hi - lo)) : 0;
            out[header + r * map.spec.nx + i] = static_cast<char>(static_cast<unsigned char>(level));
        }
    }
    return out;
}

}  // namespace regionlab
