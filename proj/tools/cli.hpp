#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cyclsteg/sensor.hpp"

namespace cyclsteg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kIoError = 3,
};

/// Parses the `pipeline send` records file: `id,kind,timestamp,value_millis`
/// per line, optional header line starting with "id", blank lines ignored.
std::vector<SensorRecord> parse_records_csv(std::string_view text);

/// `id,kind,timestamp,value` as printed by `pipeline serve`.
std::string format_record_line(const SensorRecord& r);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cyclsteg::cli
