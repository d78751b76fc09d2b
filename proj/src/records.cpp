#include "floqgap/records.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace floqgap {

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "command", "n",      "gamma",    "pattern",  "k",     "seed",  "realization", "delta",  "method",
        "iterations", "residual", "status", "quantity", "index", "value", "label",       "detail", "config_hash"};
    return cols;
}

std::string record_header() {
    std::string s;
    for (const auto& c : record_columns()) s += (s.empty() ? "" : ",") + c;
    return s;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quote in record");
    return out;
}

namespace {

template <class T>
std::string opt(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>)
        return format_double(*v);
    else
        return std::to_string(*v);
}

template <class T>
std::optional<T> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        // from_chars rejects "inf"/"nan" spellings on some libraries
        if constexpr (std::is_floating_point_v<T>) return T(std::stod(s));
        throw std::invalid_argument("bad numeric field '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_record(const RunRecord& r) {
    const std::string f[] = {csv_escape(r.command), opt(r.n),          opt(r.gamma),       csv_escape(r.pattern),
                             opt(r.k),              opt(r.seed),       opt(r.realization), opt(r.delta),
                             csv_escape(r.method),  opt(r.iterations), opt(r.residual),    csv_escape(r.status),
                             csv_escape(r.quantity), opt(r.index),     opt(r.value),       csv_escape(r.label),
                             csv_escape(r.detail),  csv_escape(r.config_hash)};
    std::string s;
    for (size_t i = 0; i < std::size(f); ++i) s += (i ? "," : "") + f[i];
    return s;
}

RunRecord parse_record(const std::string& line) {
    const auto f = split_csv_line(line);
    if (f.size() != record_columns().size())
        throw std::invalid_argument("record has " + std::to_string(f.size()) + " fields, expected " +
                                    std::to_string(record_columns().size()));
    RunRecord r;
    r.command = f[0];
    r.n = parse_opt<int>(f[1]);
    r.gamma = parse_opt<double>(f[2]);
    r.pattern = f[3];
    r.k = parse_opt<int>(f[4]);
    r.seed = parse_opt<uint64_t>(f[5]);
    r.realization = parse_opt<int>(f[6]);
    r.delta = parse_opt<double>(f[7]);
    r.method = f[8];
    r.iterations = parse_opt<int64_t>(f[9]);
    r.residual = parse_opt<double>(f[10]);
    r.status = f[11];
    r.quantity = f[12];
    r.index = parse_opt<int64_t>(f[13]);
    r.value = parse_opt<double>(f[14]);
    r.label = f[15];
    r.detail = f[16];
    r.config_hash = f[17];
    return r;
}

std::vector<RunRecord> read_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty record stream");
    if (line != record_header()) throw std::invalid_argument("record header mismatch: " + line);
    std::vector<RunRecord> out;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(parse_record(line));
    return out;
}

std::string hash_hex(const std::string& canonical) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[size_t(i)] = digits[h & 15];
    return s;
}

RecordAppender::RecordAppender(std::ostream& out, bool write_header) : out_(out) {
    if (write_header) out_ << record_header() << '\n';
}

bool RecordAppender::file_needs_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return true;
    std::string first;
    if (!std::getline(in, first) || first.empty()) return true;
    if (first != record_header()) throw std::invalid_argument("existing file " + path + " has a different header");
    return false;
}

void RecordAppender::write(const RunRecord& r) {
    std::lock_guard lock(mu_);
    out_ << format_record(r) << '\n';
    ++count_;
}

void RecordAppender::write(const std::vector<RunRecord>& rs) {
    std::lock_guard lock(mu_);
    for (const auto& r : rs) out_ << format_record(r) << '\n';
    count_ += rs.size();
    out_.flush();
}

}  // namespace floqgap
