#include "ranklab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

#include "ranklab/errors.hpp"

namespace ranklab {
namespace {

bool height_less(const CurveRecord& a, const CurveRecord& b) { return a.height < b.height; }

std::int64_t parse_int(std::string_view field, const std::string& where) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ValidationError(where + ": not an integer: '" + std::string(field) + "'");
  return v;
}

}  // namespace

void validate_record(const CurveRecord& r, const std::string& where) {
  if (r.height < 1) throw ValidationError(where + ": height must be >= 1");
  if (r.selmer_rank < 0 || r.rank < 0)
    throw ValidationError(where + ": negative rank field");
  if (r.rank > r.selmer_rank)
    throw ValidationError(where + ": rank " + std::to_string(r.rank) + " exceeds selmer_rank " +
                          std::to_string(r.selmer_rank));
  if ((r.rank & 1) != (r.selmer_rank & 1))
    throw ValidationError(where + ": rank and selmer_rank have different parity");
}

Dataset::Dataset(std::vector<CurveRecord> rows, bool* sorted_notice) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i)
    validate_record(rows_[i], "row " + std::to_string(i + 1));
  const bool sorted = std::is_sorted(rows_.begin(), rows_.end(), height_less);
  if (!sorted) std::stable_sort(rows_.begin(), rows_.end(), height_less);
  if (sorted_notice) *sorted_notice = !sorted;
}

Dataset Dataset::from_csv(const std::string& path, std::string* notice) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "height,selmer_rank,rank")
    throw ValidationError(path + ":1: header must be exactly 'height,selmer_rank,rank'");

  std::vector<CurveRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos)
      throw ValidationError(where + ": expected exactly 3 comma-separated fields");
    CurveRecord r;
    r.height = parse_int(std::string_view(line).substr(0, c1), where);
    r.selmer_rank = static_cast<std::int32_t>(
        parse_int(std::string_view(line).substr(c1 + 1, c2 - c1 - 1), where));
    r.rank = static_cast<std::int32_t>(parse_int(std::string_view(line).substr(c2 + 1), where));
    validate_record(r, where);
    rows.push_back(r);
  }

  bool was_unsorted = false;
  Dataset d(std::move(rows), &was_unsorted);
  if (was_unsorted && notice) *notice = path + ": input not sorted by height; sorted on ingest";
  return d;
}

void Dataset::write_csv(std::ostream& os) const {
  os << "height,selmer_rank,rank\n";
  for (const CurveRecord& r : rows_)
    os << r.height << ',' << r.selmer_rank << ',' << r.rank << '\n';
}

std::size_t Dataset::upper_bound_height(std::int64_t X) const {
  const CurveRecord probe{X, 0, 0};
  return static_cast<std::size_t>(
      std::upper_bound(rows_.begin(), rows_.end(), probe, height_less) - rows_.begin());
}

std::pair<std::size_t, std::size_t> Dataset::window(std::int64_t X, std::int64_t N) const {
  return {upper_bound_height(X), upper_bound_height(X + N)};
}

}  // namespace ranklab
