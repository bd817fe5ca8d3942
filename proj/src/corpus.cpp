#include "vlsym/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vlsym {

bool well_formed(const Skeleton& s) {
  if (s.row_ptr.size() != static_cast<std::size_t>(s.rows) + 1) return false;
  if (s.row_ptr.front() != 0 || s.row_ptr.back() != s.col_ind.size()) return false;
  for (std::uint32_t i = 0; i < s.rows; ++i) {
    if (s.row_ptr[i] > s.row_ptr[i + 1]) return false;
    for (std::uint32_t k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) {
      if (s.col_ind[k] >= s.cols) return false;
      if (k > s.row_ptr[i] && s.col_ind[k - 1] >= s.col_ind[k]) return false;
    }
  }
  return true;
}

std::vector<Skeleton> enumerate_skeletons(std::uint32_t rows, std::uint32_t cols) {
  if (cols >= 16 || static_cast<std::uint64_t>(rows) * cols > 24) {
    throw std::invalid_argument("too many skeletons to enumerate");
  }
  const std::uint32_t subsets = 1u << cols;
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < rows; ++i) total *= subsets;

  std::vector<Skeleton> out;
  out.reserve(total);
  std::vector<std::uint32_t> mask(rows, 0);  // column subset of each row
  for (std::uint64_t n = 0; n < total; ++n) {
    Skeleton s;
    s.rows = rows;
    s.cols = cols;
    s.row_ptr.push_back(0);
    for (std::uint32_t i = 0; i < rows; ++i) {
      for (std::uint32_t j = 0; j < cols; ++j) {
        if (mask[i] & (1u << j)) s.col_ind.push_back(j);
      }
      s.row_ptr.push_back(static_cast<std::uint32_t>(s.col_ind.size()));
    }
    out.push_back(std::move(s));
    for (std::uint32_t i = rows; i-- > 0;) {
      if (++mask[i] < subsets) break;
      mask[i] = 0;
    }
  }
  return out;
}

std::vector<SourceFile> load_corpus(const std::string& dir, const std::vector<std::string>& names) {
  std::vector<SourceFile> files;
  for (const auto& name : names) {
    std::ifstream in(dir + "/" + name, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read corpus file '" + dir + "/" + name + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    files.push_back({name, ss.str()});
  }
  return files;
}

}  // namespace vlsym
