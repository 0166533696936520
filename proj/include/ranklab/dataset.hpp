#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ranklab {

// One curve row: (height, 2-Selmer rank, Mordell-Weil rank).
// Invariants: height >= 1, 0 <= rank <= selmer_rank, rank == selmer_rank mod 2.
struct CurveRecord {
  std::int64_t height = 0;
  std::int32_t selmer_rank = 0;
  std::int32_t rank = 0;

  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

// A moving-ratio observation over the window (X, X+N].
struct RatioPoint {
  std::int64_t X = 0;
  std::int64_t N = 0;
  double value = 0.0;
  std::int64_t sample_count = 0;
};

// Immutable, height-sorted collection of curve records.
class Dataset {
 public:
  Dataset() = default;

  // Validates every record; sorts if needed (sets *sorted_notice).
  explicit Dataset(std::vector<CurveRecord> rows, bool* sorted_notice = nullptr);

  // Parses the CSV with header `height,selmer_rank,rank`, line by line.
  // Violations raise ValidationError naming path:line. Unsorted input is
  // sorted, with a notice appended to *notice when provided.
  static Dataset from_csv(const std::string& path, std::string* notice = nullptr);

  void write_csv(std::ostream& os) const;

  std::span<const CurveRecord> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Index range [first, last) of rows with height in (X, X+N].
  std::pair<std::size_t, std::size_t> window(std::int64_t X, std::int64_t N) const;

  // Index of the first row with height > X.
  std::size_t upper_bound_height(std::int64_t X) const;

 private:
  std::vector<CurveRecord> rows_;
};

// Checks one record's invariants; throws ValidationError with `where` as
// the location prefix.
void validate_record(const CurveRecord& r, const std::string& where);

}  // namespace ranklab
