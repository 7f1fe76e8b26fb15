#pragma once

#include <memory>
#include <string>
#include <vector>

#include "subbag/dataset.hpp"
#include "subbag/family.hpp"

namespace subbag {

enum class CsvStorage {
  InMemory,  // parse once into dense matrices
  Indexed,   // keep a row-offset index, parse rows on demand
};

struct CsvOptions {
  std::string response;
  std::vector<std::string> covariates;  // empty: every non-response column, file order
  bool intercept = false;               // prepend a constant-1 column
  CsvStorage storage = CsvStorage::InMemory;
};

// Loads a comma-separated table with a header row. Cells are plain tokens
// (no quoting); a column whose cells all parse as finite numbers is numeric,
// anything else is categorical and expands to indicator columns for every
// level after the first seen ("name=level"), the first level being the
// reference. Empty cells and non-finite numbers raise DataError with the row
// and column. For Logistic the response must be 0/1.
//
// Indexed storage scans the file up front (schema, validation, byte offsets)
// and reads back only the rows a gather asks for, so memory stays
// O(rows * 8 bytes + gather size) however wide or long the table is.
std::unique_ptr<Dataset> load_csv(const std::string& path, Family family,
                                  const CsvOptions& options);

}  // namespace subbag
