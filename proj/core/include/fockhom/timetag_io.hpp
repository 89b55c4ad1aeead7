// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_TIMETAG_IO_HPP
#define FOCKHOM_TIMETAG_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace fockhom {

struct TimeTagRecord {
    std::uint8_t detector_id = 1;  // 1 or 2
    std::uint64_t timestamp_ps = 0;
    bool operator==(const TimeTagRecord&) const = default;
};

using TimeTagStream = std::vector<TimeTagRecord>;

inline constexpr const char* kTimeTagCsvHeader = "detector_id,timestamp_ps";
/// Bytes per binary record: detector id, then little-endian u64 timestamp.
inline constexpr std::size_t kBinaryRecordSize = 9;

enum class TimeTagFormat { kCsv, kBinary };

/// kCsv for a ".csv" extension, kBinary otherwise.
TimeTagFormat format_for_path(const std::filesystem::path& path);

/// Throws InputFormatError on a bad detector id or decreasing timestamps.
void validate_stream(const TimeTagStream& stream);

void write_csv(std::ostream& out, const TimeTagStream& stream);
void write_binary(std::ostream& out, const TimeTagStream& stream);
/// Both readers validate and throw InputFormatError on malformed input; an
/// empty CSV (no header) is malformed.
TimeTagStream read_csv(std::istream& in);
TimeTagStream read_binary(std::istream& in);

void write_stream(const std::filesystem::path& path, const TimeTagStream& stream);
TimeTagStream read_stream(const std::filesystem::path& path);

}  // namespace fockhom

#endif
