#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pcmf/common.hpp"

namespace pcmf {

/// CSV with one header row; rectangular, numeric cells. Parse failures carry
/// 1-based row/column locations.
Matrix read_csv_matrix(const std::filesystem::path& file, std::vector<std::string>* header = nullptr);
void write_csv_matrix(const std::filesystem::path& file, const Matrix& m,
                      const std::vector<std::string>& header = {});

std::vector<int> read_labels_csv(const std::filesystem::path& file);
void write_labels_csv(const std::filesystem::path& file, const std::vector<int>& labels);

/// Binary matrix blob: 16-byte header (8-byte magic "PCMFBLB1", uint32 rows,
/// uint32 cols, little-endian) followed by column-major float64 payload,
/// little-endian. Bit-exact round trip.
void write_matrix_blob(const std::filesystem::path& file, const Matrix& m);
Matrix read_matrix_blob(const std::filesystem::path& file);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::filesystem::path& file);
std::string hex64(std::uint64_t value);

/// Reproducibility record written next to every CLI run's outputs.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> input_hashes;   // path -> fnv1a64 hex
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> outputs;  // path -> fnv1a64 hex
    std::string version = kVersion;
};

void write_manifest(const std::filesystem::path& file, const RunManifest& manifest);

}  // namespace pcmf
