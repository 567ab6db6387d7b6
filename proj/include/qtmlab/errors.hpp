#pragma once

#include <stdexcept>
#include <string>

namespace qtmlab {

// line/col are 1-based; 0 means the location is unknown
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, int line = 0, int col = 0)
      : std::runtime_error(locate(msg, line, col)), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  static std::string locate(const std::string& msg, int line, int col) {
    std::string s;
    if (line > 0) s += "line " + std::to_string(line) + ": ";
    if (col > 0) s += "col " + std::to_string(col) + ": ";
    return s + msg;
  }
  int line_;
  int col_;
};

class semantic_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// a configuration reached a (state, symbol) combination that has no
// transition class; impossible in closed evolution, so it signals a broken
// input superposition
class protocol_violation : public semantic_error {
 public:
  using semantic_error::semantic_error;
};

class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtmlab
