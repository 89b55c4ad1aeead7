// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/timetag_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "fockhom/errors.hpp"

namespace fockhom {

TimeTagFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? TimeTagFormat::kCsv : TimeTagFormat::kBinary;
}

void validate_stream(const TimeTagStream& stream) {
    std::uint64_t last = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const auto& r = stream[i];
        if (r.detector_id != 1 && r.detector_id != 2) {
            throw InputFormatError("record " + std::to_string(i) + ": detector id must be 1 or 2");
        }
        if (r.timestamp_ps < last) {
            throw InputFormatError("record " + std::to_string(i) + ": timestamps decrease");
        }
        last = r.timestamp_ps;
    }
}

void write_csv(std::ostream& out, const TimeTagStream& stream) {
    out << kTimeTagCsvHeader << '\n';
    std::string line;
    for (const auto& r : stream) {
        line = std::to_string(static_cast<int>(r.detector_id));
        line += ',';
        line += std::to_string(r.timestamp_ps);
        line += '\n';
        out << line;
    }
}

void write_binary(std::ostream& out, const TimeTagStream& stream) {
    std::array<char, kBinaryRecordSize> buf{};
    for (const auto& r : stream) {
        buf[0] = static_cast<char>(r.detector_id);
        for (int b = 0; b < 8; ++b) {
            buf[1 + b] = static_cast<char>((r.timestamp_ps >> (8 * b)) & 0xff);
        }
        out.write(buf.data(), buf.size());
    }
}

TimeTagStream read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputFormatError("time-tag CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kTimeTagCsvHeader) {
        throw InputFormatError("time-tag CSV header must be '" + std::string(kTimeTagCsvHeader) + "'");
    }
    TimeTagStream out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        unsigned det = 0;
        std::uint64_t ts = 0;
        const char* end = line.data() + line.size();
        bool ok = comma != std::string::npos;
        if (ok) {
            auto a = std::from_chars(line.data(), line.data() + comma, det);
            auto b = std::from_chars(line.data() + comma + 1, end, ts);
            ok = a.ec == std::errc() && a.ptr == line.data() + comma && b.ec == std::errc() && b.ptr == end;
        }
        if (!ok || det > 255) {
            throw InputFormatError("time-tag CSV line " + std::to_string(lineno) + ": malformed record");
        }
        out.push_back({static_cast<std::uint8_t>(det), ts});
    }
    validate_stream(out);
    return out;
}

TimeTagStream read_binary(std::istream& in) {
    TimeTagStream out;
    std::array<char, kBinaryRecordSize> buf{};
    while (true) {
        in.read(buf.data(), buf.size());
        const auto got = in.gcount();
        if (got == 0) {
            break;
        }
        if (got != static_cast<std::streamsize>(buf.size())) {
            throw InputFormatError("time-tag binary stream ends mid-record");
        }
        TimeTagRecord r;
        r.detector_id = static_cast<std::uint8_t>(buf[0]);
        for (int b = 0; b < 8; ++b) {
            r.timestamp_ps |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[1 + b])) << (8 * b);
        }
        out.push_back(r);
    }
    validate_stream(out);
    return out;
}

void write_stream(const std::filesystem::path& path, const TimeTagStream& stream) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputFormatError("cannot open '" + path.string() + "' for writing");
    }
    if (format_for_path(path) == TimeTagFormat::kCsv) {
        write_csv(out, stream);
    } else {
        write_binary(out, stream);
    }
    if (!out) {
        throw InputFormatError("write to '" + path.string() + "' failed");
    }
}

TimeTagStream read_stream(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputFormatError("cannot open '" + path.string() + "'");
    }
    return format_for_path(path) == TimeTagFormat::kCsv ? read_csv(in) : read_binary(in);
}

}  // namespace fockhom
