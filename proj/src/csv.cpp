#include "subbag/csv.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "subbag/error.hpp"

namespace subbag {

namespace {

bool parse_double(std::string_view cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

struct CsvColumn {
  std::string name;
  std::size_t file_col = 0;
  bool categorical = false;
  std::vector<std::string> levels;  // first-seen order; levels[0] is the reference
  std::unordered_map<std::string, std::size_t> level_ids;
  Eigen::Index first_out = 0;  // position of this column's first output slot
  Eigen::Index width = 1;      // numeric: 1; categorical: levels - 1
};

struct CsvSchema {
  std::vector<std::string> header;
  std::size_t response_col = 0;
  std::vector<CsvColumn> covariates;
  bool intercept = false;
  Eigen::Index p_out = 0;
  std::vector<std::string> out_names;
  std::uint64_t n_rows = 0;
  std::vector<std::uint64_t> offsets;  // n_rows + 1 entries, byte offsets of data lines
};

[[noreturn]] void cell_error(const std::string& what, std::uint64_t row,
                             const std::string& column) {
  // Rows are reported 1-based over the data lines, header excluded.
  throw DataError(what + " at data row " + std::to_string(row + 1) + ", column '" + column + "'");
}

// Streams the data lines of the file, calling fn(row_index, fields).
template <typename Fn>
void stream_rows(const std::string& path, std::size_t n_cols, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);  // header, already parsed
  std::vector<std::string_view> fields;
  std::uint64_t row = 0;
  while (std::getline(in, line)) {
    std::string_view body = strip_cr(line);
    if (body.empty() && in.peek() == EOF) break;  // trailing blank line
    split_fields(body, fields);
    if (fields.size() != n_cols) {
      throw DataError("data row " + std::to_string(row + 1) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(n_cols));
    }
    fn(row, fields);
    ++row;
  }
}

CsvSchema scan_schema(const std::string& path, Family family, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': empty file");

  CsvSchema schema;
  schema.intercept = options.intercept;
  {
    std::vector<std::string_view> fields;
    split_fields(strip_cr(line), fields);
    for (auto f : fields) schema.header.emplace_back(f);
  }
  const std::uint64_t header_bytes = static_cast<std::uint64_t>(line.size()) + 1;

  auto find_col = [&](const std::string& name) {
    for (std::size_t i = 0; i < schema.header.size(); ++i) {
      if (schema.header[i] == name) return i;
    }
    throw DataError("'" + path + "': no column named '" + name + "'");
  };

  if (options.response.empty()) throw ConfigError("load_csv: response column not set");
  schema.response_col = find_col(options.response);

  std::vector<std::size_t> cov_cols;
  if (options.covariates.empty()) {
    for (std::size_t i = 0; i < schema.header.size(); ++i) {
      if (i != schema.response_col) cov_cols.push_back(i);
    }
  } else {
    for (const auto& name : options.covariates) {
      std::size_t c = find_col(name);
      if (c == schema.response_col) {
        throw ConfigError("load_csv: '" + name + "' is the response");
      }
      if (std::find(cov_cols.begin(), cov_cols.end(), c) != cov_cols.end()) {
        throw ConfigError("load_csv: covariate '" + name + "' listed twice");
      }
      cov_cols.push_back(c);
    }
  }
  if (cov_cols.empty()) throw ConfigError("load_csv: no covariate columns");

  schema.covariates.resize(cov_cols.size());
  for (std::size_t i = 0; i < cov_cols.size(); ++i) {
    schema.covariates[i].name = schema.header[cov_cols[i]];
    schema.covariates[i].file_col = cov_cols[i];
  }

  // Pass 1: offsets, field counts, response validation, numeric-or-not per
  // covariate column. Level collection waits for pass 2 so that a column
  // that turns categorical mid-file still gets its early rows' levels.
  bool any_categorical = false;
  {
    std::uint64_t pos = header_bytes;
    std::vector<std::string_view> fields;
    std::uint64_t row = 0;
    while (std::getline(in, line)) {
      std::string_view body = strip_cr(line);
      if (body.empty() && in.peek() == EOF) break;  // trailing blank line
      schema.offsets.push_back(pos);
      pos += static_cast<std::uint64_t>(line.size()) + 1;
      split_fields(body, fields);
      if (fields.size() != schema.header.size()) {
        throw DataError("data row " + std::to_string(row + 1) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(schema.header.size()));
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].empty()) cell_error("missing value", row, schema.header[i]);
      }
      double yv;
      if (!parse_double(fields[schema.response_col], yv) || !std::isfinite(yv)) {
        cell_error("response is not a finite number", row, options.response);
      }
      if (family == Family::Logistic && yv != 0.0 && yv != 1.0) {
        cell_error("logistic response must be 0 or 1", row, options.response);
      }
      for (auto& col : schema.covariates) {
        if (col.categorical) continue;
        double v;
        if (!parse_double(fields[col.file_col], v)) {
          col.categorical = true;
          any_categorical = true;
        } else if (!std::isfinite(v)) {
          cell_error("non-finite value", row, col.name);
        }
      }
      ++row;
    }
    schema.n_rows = row;
    schema.offsets.push_back(pos);
  }
  if (schema.n_rows == 0) throw DataError("'" + path + "': no data rows");

  if (any_categorical) {
    // Pass 2: levels in first-seen order.
    stream_rows(path, schema.header.size(), [&](std::uint64_t, const auto& fields) {
      for (auto& col : schema.covariates) {
        if (!col.categorical) continue;
        std::string level(fields[col.file_col]);
        if (col.level_ids.emplace(level, col.levels.size()).second) {
          col.levels.push_back(std::move(level));
        }
      }
    });
  }

  Eigen::Index out = 0;
  if (schema.intercept) {
    schema.out_names.emplace_back("(Intercept)");
    ++out;
  }
  for (auto& col : schema.covariates) {
    col.first_out = out;
    if (col.categorical) {
      col.width = static_cast<Eigen::Index>(col.levels.size()) - 1;
      for (std::size_t l = 1; l < col.levels.size(); ++l) {
        schema.out_names.push_back(col.name + "=" + col.levels[l]);
      }
    } else {
      col.width = 1;
      schema.out_names.push_back(col.name);
    }
    out += col.width;
  }
  schema.p_out = out;
  if (schema.p_out == 0) throw DataError("'" + path + "': covariates expand to zero columns");
  return schema;
}

// Fills one expanded covariate row (and the response) from raw fields.
void expand_row(const CsvSchema& schema, std::uint64_t row,
                const std::vector<std::string_view>& fields, double& y_out,
                Eigen::Ref<Eigen::MatrixXd> x, Eigen::Index x_row) {
  double yv;
  if (!parse_double(fields[schema.response_col], yv) || !std::isfinite(yv)) {
    cell_error("response is not a finite number", row, schema.header[schema.response_col]);
  }
  y_out = yv;
  x.row(x_row).setZero();
  if (schema.intercept) x(x_row, 0) = 1.0;
  for (const auto& col : schema.covariates) {
    std::string_view cell = fields[col.file_col];
    if (cell.empty()) cell_error("missing value", row, col.name);
    if (col.categorical) {
      auto it = col.level_ids.find(std::string(cell));
      if (it == col.level_ids.end()) {
        cell_error("unseen categorical level '" + std::string(cell) + "'", row, col.name);
      }
      if (it->second > 0) {
        x(x_row, col.first_out + static_cast<Eigen::Index>(it->second) - 1) = 1.0;
      }
    } else {
      double v;
      if (!parse_double(cell, v) || !std::isfinite(v)) {
        cell_error("non-finite value", row, col.name);
      }
      x(x_row, col.first_out) = v;
    }
  }
}

class CsvIndexedDataset final : public Dataset {
 public:
  CsvIndexedDataset(const std::string& path, CsvSchema schema)
      : schema_(std::move(schema)), path_(path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0) throw DataError("cannot open '" + path + "'");
  }

  ~CsvIndexedDataset() override {
    if (fd_ >= 0) ::close(fd_);
  }

  CsvIndexedDataset(const CsvIndexedDataset&) = delete;
  CsvIndexedDataset& operator=(const CsvIndexedDataset&) = delete;

  std::uint64_t rows() const override { return schema_.n_rows; }
  Eigen::Index cols() const override { return schema_.p_out; }
  const std::vector<std::string>& covariate_names() const override { return schema_.out_names; }

  void gather(std::span<const std::uint64_t> indices, Eigen::Ref<Eigen::VectorXd> y,
              Eigen::Ref<Eigen::MatrixXd> x) const override {
    const auto n = static_cast<Eigen::Index>(indices.size());
    if (y.size() != n || x.rows() != n || x.cols() != schema_.p_out) {
      throw DataError("gather: output shape mismatch");
    }
    std::string buf;
    std::vector<std::string_view> fields;
    for (Eigen::Index r = 0; r < n; ++r) {
      const std::uint64_t i = indices[static_cast<std::size_t>(r)];
      if (i >= schema_.n_rows) throw DataError("gather: row index out of range");
      const std::uint64_t begin = schema_.offsets[i];
      const std::uint64_t end = schema_.offsets[i + 1];
      buf.resize(end - begin);
      ssize_t got = ::pread(fd_, buf.data(), buf.size(), static_cast<off_t>(begin));
      if (got < 0 || (static_cast<std::uint64_t>(got) < buf.size() && i + 1 < schema_.n_rows)) {
        throw DataError("'" + path_ + "': short read, file changed under the index?");
      }
      std::string_view body(buf.data(), static_cast<std::size_t>(got));
      while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);
      split_fields(body, fields);
      if (fields.size() != schema_.header.size()) {
        throw DataError("data row " + std::to_string(i + 1) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(schema_.header.size()));
      }
      expand_row(schema_, i, fields, y[r], x, r);
    }
  }

 private:
  CsvSchema schema_;
  std::string path_;
  int fd_ = -1;
};

}  // namespace

std::unique_ptr<Dataset> load_csv(const std::string& path, Family family,
                                  const CsvOptions& options) {
  if (!std::filesystem::exists(path)) {
    throw DataError("no such file: '" + path + "'");
  }
  CsvSchema schema = scan_schema(path, family, options);

  if (options.storage == CsvStorage::Indexed) {
    return std::make_unique<CsvIndexedDataset>(path, std::move(schema));
  }

  const auto n = static_cast<Eigen::Index>(schema.n_rows);
  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, schema.p_out);
  stream_rows(path, schema.header.size(), [&](std::uint64_t row, const auto& fields) {
    expand_row(schema, row, fields, y[static_cast<Eigen::Index>(row)], x,
               static_cast<Eigen::Index>(row));
  });
  return std::make_unique<InMemoryDataset>(std::move(y), std::move(x), family,
                                           std::move(schema.out_names));
}

}  // namespace subbag
