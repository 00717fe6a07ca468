#include "hfirst/aer_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hfirst/log.hpp"

namespace hfirst {

namespace {

std::uint64_t load_le(const unsigned char* p, int n) {
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void store_le(std::string& out, std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

DecodeResult decode_binary(const std::string& data, const SensorGeometry& geometry) {
    DecodeResult r;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    std::size_t off = 0;
    if (data.size() >= sizeof(kBinaryMagic) && std::memcmp(bytes, kBinaryMagic, sizeof(kBinaryMagic)) == 0) {
        r.had_magic = true;
        off = sizeof(kBinaryMagic);
    }
    const std::size_t body = data.size() - off;
    if (body % kBinaryRecordSize != 0)
        throw DecodeError("truncated binary-v1 record at byte " +
                          std::to_string(off + (body / kBinaryRecordSize) * kBinaryRecordSize) + ": " +
                          std::to_string(body % kBinaryRecordSize) + " trailing bytes");
    const std::size_t n = body / kBinaryRecordSize;
    r.events.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char* rec = bytes + off + i * kBinaryRecordSize;
        const std::size_t at = off + i * kBinaryRecordSize;
        Event e;
        e.t = load_le(rec, 8);
        e.x = static_cast<std::uint16_t>(load_le(rec + 8, 2));
        e.y = static_cast<std::uint16_t>(load_le(rec + 10, 2));
        e.p = rec[12];
        if (e.p > 1)
            throw DecodeError("malformed binary-v1 record at byte " + std::to_string(at) + ": polarity " +
                              std::to_string(int(e.p)) + " not in {0,1}");
        if (rec[13] != 0 || rec[14] != 0 || rec[15] != 0)
            throw DecodeError("malformed binary-v1 record at byte " + std::to_string(at) +
                              ": reserved bytes not zero");
        if (!geometry.contains(e.x, e.y))
            throw ValidationError("event " + std::to_string(i) + " at byte " + std::to_string(at) +
                                  ": coordinates (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                                  ") outside " + std::to_string(geometry.width) + "x" +
                                  std::to_string(geometry.height));
        r.events.push_back(e);
    }
    return r;
}

// Strict unsigned decimal field; [first, last) must be fully consumed.
template <typename T>
bool parse_field(const char* first, const char* last, T& out) {
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

DecodeResult decode_csv(const std::string& data, const SensorGeometry& geometry) {
    DecodeResult r;
    if (data.empty()) return r;
    std::size_t pos = 0, line_no = 0;
    bool header_seen = false;
    while (pos <= data.size()) {
        std::size_t eol = data.find('\n', pos);
        std::size_t end = (eol == std::string::npos) ? data.size() : eol;
        ++line_no;
        std::size_t len = end - pos;
        if (len > 0 && data[pos + len - 1] == '\r') --len; // tolerate CRLF
        std::string_view line(data.data() + pos, len);
        if (!line.empty()) {
            if (!header_seen) {
                if (line != "t_us,x,y,p")
                    throw DecodeError("line 1: expected CSV header \"t_us,x,y,p\", got \"" + std::string(line) +
                                      "\"");
                header_seen = true;
            } else {
                const char* b = line.data();
                const char* e = b + line.size();
                const char* c1 = static_cast<const char*>(std::memchr(b, ',', e - b));
                const char* c2 = c1 ? static_cast<const char*>(std::memchr(c1 + 1, ',', e - c1 - 1)) : nullptr;
                const char* c3 = c2 ? static_cast<const char*>(std::memchr(c2 + 1, ',', e - c2 - 1)) : nullptr;
                Event ev;
                std::uint32_t x = 0, y = 0, p = 0;
                if (!c3 || std::memchr(c3 + 1, ',', e - c3 - 1) || !parse_field(b, c1, ev.t) ||
                    !parse_field(c1 + 1, c2, x) || !parse_field(c2 + 1, c3, y) || !parse_field(c3 + 1, e, p) ||
                    x > 0xffff || y > 0xffff || p > 1)
                    throw DecodeError("line " + std::to_string(line_no) + ": malformed CSV event record \"" +
                                      std::string(line) + "\"");
                ev.x = static_cast<std::uint16_t>(x);
                ev.y = static_cast<std::uint16_t>(y);
                ev.p = static_cast<std::uint8_t>(p);
                if (!geometry.contains(ev.x, ev.y))
                    throw ValidationError("event at line " + std::to_string(line_no) + ": coordinates (" +
                                          std::to_string(ev.x) + "," + std::to_string(ev.y) + ") outside " +
                                          std::to_string(geometry.width) + "x" + std::to_string(geometry.height));
                r.events.push_back(ev);
            }
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return r;
}

} // namespace

DecodeResult decode_events(const std::string& data, EventFormat format, const SensorGeometry& geometry) {
    DecodeResult r = (format == EventFormat::binary_v1) ? decode_binary(data, geometry) : decode_csv(data, geometry);
    if (!is_sorted_by_time(r.events)) {
        log::warn("decoded stream had decreasing timestamps; stably re-sorted");
        std::stable_sort(r.events.begin(), r.events.end(),
                         [](const Event& a, const Event& b) { return a.t < b.t; });
        r.reordered = true;
    }
    return r;
}

std::string encode_events(const std::vector<Event>& events, EventFormat format, bool with_magic) {
    if (!is_sorted_by_time(events))
        throw ValidationError("encode_events requires a time-sorted stream");
    std::string out;
    if (format == EventFormat::binary_v1) {
        out.reserve((with_magic ? sizeof(kBinaryMagic) : 0) + events.size() * kBinaryRecordSize);
        if (with_magic) out.append(reinterpret_cast<const char*>(kBinaryMagic), sizeof(kBinaryMagic));
        for (const Event& e : events) {
            store_le(out, e.t, 8);
            store_le(out, e.x, 2);
            store_le(out, e.y, 2);
            out.push_back(static_cast<char>(e.p));
            out.append(3, '\0');
        }
    } else {
        out = "t_us,x,y,p\n";
        char buf[64];
        for (const Event& e : events) {
            int n = std::snprintf(buf, sizeof(buf), "%llu,%u,%u,%u\n", static_cast<unsigned long long>(e.t),
                                  unsigned(e.x), unsigned(e.y), unsigned(e.p));
            out.append(buf, n);
        }
    }
    return out;
}

EventFormat format_for_path(const std::filesystem::path& p) {
    return p.extension() == ".csv" ? EventFormat::csv : EventFormat::binary_v1;
}

const char* format_name(EventFormat format) { return format == EventFormat::csv ? "csv" : "binary-v1"; }

EventFormat parse_format(const std::string& name) {
    if (name == "binary-v1") return EventFormat::binary_v1;
    if (name == "csv") return EventFormat::csv;
    throw ConfigError("unknown event format '" + name + "' (expected binary-v1 or csv)");
}

const char* format_extension(EventFormat format) { return format == EventFormat::csv ? ".csv" : ".aer"; }

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + p.string());
    return std::move(ss).str();
}

void write_file(const std::filesystem::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("failed writing " + p.string());
}

DecodeResult read_events_file(const std::filesystem::path& p, EventFormat format, const SensorGeometry& geometry) {
    return decode_events(read_file(p), format, geometry);
}

DecodeResult read_events_file(const std::filesystem::path& p, const SensorGeometry& geometry) {
    return read_events_file(p, format_for_path(p), geometry);
}

void write_events_file(const std::filesystem::path& p, const std::vector<Event>& events, EventFormat format,
                       bool with_magic) {
    write_file(p, encode_events(events, format, with_magic));
}

} // namespace hfirst
