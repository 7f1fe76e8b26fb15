#include "subbag/summary_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

#include "subbag/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "summary files are little-endian; this build target is not");

namespace subbag {

namespace {

constexpr char kMagic[4] = {'S', 'B', 'A', 'G'};
constexpr std::uint16_t kVersion = 1;

void append_bytes(std::string& buf, const void* src, std::size_t n) {
  buf.append(static_cast<const char*>(src), n);
}

template <typename T>
void append_value(std::string& buf, T v) {
  append_bytes(buf, &v, sizeof(T));
}

struct Reader {
  const std::string& buf;
  std::size_t at = 0;
  const std::string& path;

  void read_bytes(void* dst, std::size_t n) {
    if (at + n > buf.size()) {
      throw DataError("'" + path + "': truncated summary file");
    }
    std::memcpy(dst, buf.data() + at, n);
    at += n;
  }

  template <typename T>
  T read_value() {
    T v;
    read_bytes(&v, sizeof(T));
    return v;
  }
};

std::uint32_t crc_of(const std::string& buf, std::size_t n) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(n)));
}

}  // namespace

void write_summary_file(const std::string& path, Family family, std::uint64_t master_seed,
                        std::span<const SubsampleSummary> summaries) {
  if (summaries.empty()) {
    throw ConfigError("write_summary_file: no summaries");
  }
  const Eigen::Index p = summaries[0].beta_tilde.size();
  const std::uint64_t k = summaries[0].k;

  std::string buf;
  append_bytes(buf, kMagic, sizeof(kMagic));
  append_value(buf, kVersion);
  append_value(buf, static_cast<std::uint8_t>(family));
  append_value(buf, static_cast<std::uint32_t>(p));
  append_value(buf, k);
  append_value(buf, static_cast<std::uint32_t>(summaries.size()));
  append_value(buf, master_seed);

  for (const auto& s : summaries) {
    if (s.beta_tilde.size() != p || s.hessian.rows() != p || s.hessian.cols() != p) {
      throw ConfigError("write_summary_file: summary dimension mismatch");
    }
    if (s.k != k) {
      throw ConfigError("write_summary_file: summaries disagree on k");
    }
    append_value(buf, s.subsample_id);
    append_value(buf, s.seed);
    append_value(buf, s.loss_at_opt);
    append_bytes(buf, s.beta_tilde.data(), sizeof(double) * static_cast<std::size_t>(p));
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = i; j < p; ++j) {
        append_value(buf, s.hessian(i, j));
      }
    }
  }
  append_value(buf, crc_of(buf, buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out.flush()) throw DataError("short write to '" + path + "'");
}

SummaryFileContents read_summary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < sizeof(kMagic) + sizeof(std::uint32_t)) {
    throw DataError("'" + path + "': truncated summary file");
  }
  Reader r{buf, 0, path};

  char magic[4];
  r.read_bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("'" + path + "': not a summary file (bad magic)");
  }
  const auto version = r.read_value<std::uint16_t>();
  if (version != kVersion) {
    throw DataError("'" + path + "': unsupported summary file version " +
                    std::to_string(version));
  }

  // Checksum covers everything before the trailing u32.
  const std::size_t payload = buf.size() - sizeof(std::uint32_t);
  std::uint32_t stored;
  std::memcpy(&stored, buf.data() + payload, sizeof(stored));
  if (crc_of(buf, payload) != stored) {
    throw DataError("'" + path + "': checksum mismatch, file is corrupt");
  }

  SummaryFileContents out;
  const auto fam = r.read_value<std::uint8_t>();
  if (fam > 1) {
    throw DataError("'" + path + "': unknown family tag " + std::to_string(fam));
  }
  out.family = static_cast<Family>(fam);
  out.p = r.read_value<std::uint32_t>();
  out.k = r.read_value<std::uint64_t>();
  const auto m = r.read_value<std::uint32_t>();
  out.master_seed = r.read_value<std::uint64_t>();

  const auto p = static_cast<Eigen::Index>(out.p);
  out.summaries.resize(m);
  for (auto& s : out.summaries) {
    s.k = out.k;
    s.subsample_id = r.read_value<std::uint32_t>();
    s.seed = r.read_value<std::uint64_t>();
    s.loss_at_opt = r.read_value<double>();
    s.beta_tilde.resize(p);
    r.read_bytes(s.beta_tilde.data(), sizeof(double) * out.p);
    s.hessian.resize(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = i; j < p; ++j) {
        const double v = r.read_value<double>();
        s.hessian(i, j) = v;
        s.hessian(j, i) = v;
      }
    }
  }
  if (r.at != payload) {
    throw DataError("'" + path + "': trailing bytes after last record");
  }
  return out;
}

}  // namespace subbag
