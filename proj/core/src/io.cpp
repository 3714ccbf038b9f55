#include "pcmf/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pcmf {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& cell, const std::filesystem::path& file, size_t row,
                  size_t col) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end || begin == end) {
        throw CsvError(file.string() + ": non-numeric cell '" + cell + "' at row " +
                       std::to_string(row) + ", column " + std::to_string(col));
    }
    return value;
}

constexpr char kBlobMagic[8] = {'P', 'C', 'M', 'F', 'B', 'L', 'B', '1'};

template <typename T>
void write_le(std::ofstream& os, T value) {
    if constexpr (std::endian::native == std::endian::big) {
        auto* bytes = reinterpret_cast<unsigned char*>(&value);
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        auto* bytes = reinterpret_cast<unsigned char*>(&value);
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    return value;
}

}  // namespace

Matrix read_csv_matrix(const std::filesystem::path& file, std::vector<std::string>* header) {
    std::ifstream is(file);
    if (!is) throw CsvError("cannot open '" + file.string() + "'");
    std::string line;
    if (!std::getline(is, line)) throw CsvError(file.string() + ": empty file (header expected)");
    const auto head = split_csv_line(line);
    if (header) *header = head;
    const size_t cols = head.size();

    std::vector<double> values;
    size_t rows = 0;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != cols) {
            throw CsvError(file.string() + ": row " + std::to_string(lineno) + " has " +
                           std::to_string(cells.size()) + " cells, expected " + std::to_string(cols));
        }
        for (size_t c = 0; c < cols; ++c) {
            values.push_back(parse_cell(cells[c], file, lineno, c + 1));
        }
        ++rows;
    }
    if (rows == 0) throw CsvError(file.string() + ": no data rows");
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) {
            m(static_cast<Index>(r), static_cast<Index>(c)) = values[r * cols + c];
        }
    }
    return m;
}

void write_csv_matrix(const std::filesystem::path& file, const Matrix& m,
                      const std::vector<std::string>& header) {
    if (!header.empty() && static_cast<Index>(header.size()) != m.cols()) {
        throw InvalidInput("write_csv_matrix: header width mismatch");
    }
    std::ofstream os(file);
    if (!os) throw CsvError("cannot write '" + file.string() + "'");
    for (Index c = 0; c < m.cols(); ++c) {
        if (c) os << ',';
        if (header.empty()) {
            os << "c" << c;
        } else {
            os << header[static_cast<size_t>(c)];
        }
    }
    os << '\n';
    char buf[64];
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            os << buf;
        }
        os << '\n';
    }
}

std::vector<int> read_labels_csv(const std::filesystem::path& file) {
    Matrix m = read_csv_matrix(file);
    if (m.cols() != 1) throw CsvError(file.string() + ": labels file must have one column");
    std::vector<int> labels(static_cast<size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i) {
        labels[static_cast<size_t>(i)] = static_cast<int>(std::lround(m(i, 0)));
    }
    return labels;
}

void write_labels_csv(const std::filesystem::path& file, const std::vector<int>& labels) {
    std::ofstream os(file);
    if (!os) throw CsvError("cannot write '" + file.string() + "'");
    os << "label\n";
    for (int l : labels) os << l << '\n';
}

void write_matrix_blob(const std::filesystem::path& file, const Matrix& m) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw CsvError("cannot write '" + file.string() + "'");
    os.write(kBlobMagic, sizeof(kBlobMagic));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.rows()));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.cols()));
    for (Index c = 0; c < m.cols(); ++c) {
        for (Index r = 0; r < m.rows(); ++r) {
            write_le<double>(os, m(r, c));
        }
    }
}

Matrix read_matrix_blob(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw CsvError("cannot open '" + file.string() + "'");
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kBlobMagic, sizeof(magic)) != 0) {
        throw CsvError(file.string() + ": not a pcmf matrix blob");
    }
    const auto rows = read_le<std::uint32_t>(is);
    const auto cols = read_le<std::uint32_t>(is);
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::uint32_t c = 0; c < cols; ++c) {
        for (std::uint32_t r = 0; r < rows; ++r) {
            m(static_cast<Index>(r), static_cast<Index>(c)) = read_le<double>(is);
        }
    }
    if (!is) throw CsvError(file.string() + ": truncated matrix blob");
    return m;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw CsvError("cannot open '" + file.string() + "' for hashing");
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof(buf));
        const std::streamsize got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

void write_manifest(const std::filesystem::path& file, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config"] = manifest.config;
    j["inputs"] = manifest.input_hashes;
    j["seed"] = manifest.seed;
    j["elapsed_seconds"] = manifest.elapsed_seconds;
    j["version"] = manifest.version;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [path, hash] : manifest.outputs) {
        outs.push_back({{"path", path}, {"fnv1a64", hash}});
    }
    j["outputs"] = std::move(outs);
    std::ofstream os(file);
    if (!os) throw CsvError("cannot write '" + file.string() + "'");
    os << j.dump(2) << '\n';
}

}  // namespace pcmf
