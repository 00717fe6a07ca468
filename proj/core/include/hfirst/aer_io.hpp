#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hfirst/event.hpp"

namespace hfirst {

enum class EventFormat { binary_v1, csv };

/// Optional leading magic of a binary-v1 event file.
inline constexpr unsigned char kBinaryMagic[8] = {'A', 'E', 'R', 'H', 'F', '1', '\0', '\0'};
inline constexpr std::size_t kBinaryRecordSize = 16;

struct DecodeResult {
    std::vector<Event> events;
    bool reordered = false;  // input timestamps decreased somewhere; stream was stably re-sorted
    bool had_magic = false;  // binary input carried the 8-byte magic
};

/// Decode a byte buffer (binary-v1) or text (CSV) into a validated, sorted
/// event stream.
///
/// binary-v1: optional 8-byte magic, then 16-byte little-endian records
/// (u64 t_us, u16 x, u16 y, u8 p, 3 zero bytes). CSV: header "t_us,x,y,p",
/// one decimal record per line.
///
/// Throws DecodeError (malformed record, with byte/line offset) or
/// ValidationError (coordinate outside `geometry`, identifying the event).
/// Decreasing timestamps are not an error: the stream is stably sorted and
/// flagged in `reordered`.
DecodeResult decode_events(const std::string& data, EventFormat format, const SensorGeometry& geometry);

/// Inverse of decode_events. Events must be sorted by t (ValidationError
/// otherwise). For binary-v1, `with_magic` controls the leading magic so
/// that decode/encode round-trips byte-identically either way.
std::string encode_events(const std::vector<Event>& events, EventFormat format, bool with_magic = true);

/// ".csv" maps to CSV, everything else to binary-v1.
EventFormat format_for_path(const std::filesystem::path& p);

const char* format_name(EventFormat format);          // "binary-v1" / "csv"
EventFormat parse_format(const std::string& name);    // throws ConfigError
const char* format_extension(EventFormat format);     // ".aer" / ".csv"

DecodeResult read_events_file(const std::filesystem::path& p, EventFormat format, const SensorGeometry& geometry);
DecodeResult read_events_file(const std::filesystem::path& p, const SensorGeometry& geometry); // format by extension
void write_events_file(const std::filesystem::path& p, const std::vector<Event>& events, EventFormat format,
                       bool with_magic = true);

/// Whole-file helpers used by every command.
std::string read_file(const std::filesystem::path& p);           // IoError when unreadable
void write_file(const std::filesystem::path& p, const std::string& data); // IoError when unwritable

} // namespace hfirst
