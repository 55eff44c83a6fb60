#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wronski::cli {

using Json = nlohmann::ordered_json;

// Exit statuses of run().
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

// Bad flags, unreadable or malformed input files, inputs failing validation.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  Json body;                   // fields in emission order
  std::optional<Table> table;  // CSV rendering; absent means flattened body
  bool pass = true;
};

// %.17g with -0 printed as 0; non-finite values have no JSON form and are
// emitted as null.
std::string format_double(double v);
// Two-space indentation, arrays of scalars on one line, floats per
// format_double, trailing newline.
std::string dump_json(const Json& j);
// Fields containing a comma, quote or newline are quoted. An empty table
// renders as its header line.
std::string render_csv(const Table& t);
// "field,value" rows, nested keys joined with '.', array elements by index.
Table flatten(const Json& j);

// args excludes the program name. The report goes to --out or to out;
// diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wronski::cli
