#include "shmc/cli/manifest.hpp"

#include <cstdio>
#include <fstream>

#include "shmc/cli/config.hpp"

namespace shmc::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RunError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw RunError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw RunError("cannot move " + tmp.string() + " into place: " + ec.message());
}

FileEntry write_output_file(const std::filesystem::path& run_dir, const std::string& rel_path,
                            const std::string& text) {
  const std::filesystem::path full = run_dir / rel_path;
  std::filesystem::create_directories(full.parent_path());
  write_text_atomic(full, text);
  return FileEntry{rel_path, text.size(), fnv1a_hex(text)};
}

}  // namespace shmc::cli
