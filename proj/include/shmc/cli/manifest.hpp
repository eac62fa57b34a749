#pragma once

// Output-side helpers shared by the runner: stable checksums for the file
// inventory, atomic text writes, and the common numeric formatting. Data
// files are written with round-trip precision so reruns of the same config
// are byte-identical.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace shmc::cli {

// FNV-1a over the file bytes; cheap, dependency-free, stable across runs.
std::uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);

// %.17g: shortest text that still round-trips a double exactly.
std::string format_double(double v);

// Writes to <path>.tmp in the same directory, then renames over the target,
// so a crash never leaves a half-written file behind.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

struct FileEntry {
  std::string path;  // relative to the run directory
  std::uint64_t bytes = 0;
  std::string checksum;  // fnv1a, 16 hex digits
};

// Writes the file and returns its inventory row.
FileEntry write_output_file(const std::filesystem::path& run_dir, const std::string& rel_path,
                            const std::string& text);

}  // namespace shmc::cli
