#pragma once

// Line-oriented child process over pipes (solver and oracle back ends).

#include <memory>
#include <string>
#include <vector>

namespace regrobust {

// Splits on whitespace; no quoting.
std::vector<std::string> split_command(const std::string& command);

class Subprocess {
 public:
  // argv[0] is looked up on PATH unless it contains a '/'. Throws Error.
  explicit Subprocess(const std::vector<std::string>& argv);
  ~Subprocess();
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  void write(const std::string& text);  // flushed
  bool read_line(std::string& line);    // false on EOF
  enum class Read { Line, Eof, Timeout };
  Read read_line(std::string& line, double timeout_seconds);
  void close_stdin();
  bool running();
  int wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace regrobust
