#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subbag/engine.hpp"
#include "subbag/family.hpp"

namespace subbag {

// Binary container for subsample summaries, little-endian:
//
//   magic "SBAG" | u16 version (=1) | u8 family | u32 p | u64 k | u32 m
//   | u64 master_seed
//   then m records:
//   u32 subsample_id | u64 seed | f64 loss_at_opt | p f64 beta_tilde
//   | p(p+1)/2 f64 Hessian upper triangle, row-major (i <= j)
//   then u32 CRC-32 of every preceding byte.
//
// Numbers round-trip bit-exactly. Readers reject bad magic, unknown
// versions, truncation, and checksum mismatches.
struct SummaryFileContents {
  Family family = Family::Linear;
  std::uint32_t p = 0;
  std::uint64_t k = 0;
  std::uint64_t master_seed = 0;
  std::vector<SubsampleSummary> summaries;
};

void write_summary_file(const std::string& path, Family family, std::uint64_t master_seed,
                        std::span<const SubsampleSummary> summaries);

SummaryFileContents read_summary_file(const std::string& path);

}  // namespace subbag
