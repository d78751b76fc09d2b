#pragma once

#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace floqgap {

// One flat row shared by every lab command; unset columns are written empty.
struct RunRecord {
    std::string command;
    std::optional<int> n;
    std::optional<double> gamma;
    std::string pattern;
    std::optional<int> k;
    std::optional<uint64_t> seed;
    std::optional<int> realization;
    std::optional<double> delta;
    std::string method;
    std::optional<int64_t> iterations;
    std::optional<double> residual;
    std::string status = "ok";
    std::string quantity;
    std::optional<int64_t> index;
    std::optional<double> value;
    std::string label;
    std::string detail;
    std::string config_hash;
};

const std::vector<std::string>& record_columns();
std::string record_header();
std::string format_record(const RunRecord& r);
RunRecord parse_record(const std::string& line);
std::vector<RunRecord> read_records(std::istream& in);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
// Quotes a field when it holds a comma, quote or newline.
std::string csv_escape(const std::string& s);
std::vector<std::string> split_csv_line(const std::string& line);

// FNV-1a 64 rendered as 16 hex digits.
std::string hash_hex(const std::string& canonical);

// Writes the header once. Appending to a non-empty file checks that its
// header matches instead.
class RecordAppender {
   public:
    explicit RecordAppender(std::ostream& out, bool write_header = true);
    static bool file_needs_header(const std::string& path);  // throws on header mismatch
    void write(const RunRecord& r);
    void write(const std::vector<RunRecord>& rs);
    size_t written() const { return count_; }

   private:
    std::ostream& out_;
    std::mutex mu_;
    size_t count_ = 0;
};

}  // namespace floqgap
