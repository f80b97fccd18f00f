#include "regrobust/process.hpp"

#include <poll.h>

#include <boost/process.hpp>
#include <csignal>
#include <sstream>

#include "regrobust/errors.hpp"

namespace bp = boost::process;

namespace regrobust {

std::vector<std::string> split_command(const std::string& command) {
  std::istringstream in(command);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Subprocess::Impl {
  bp::opstream in;
  bp::ipstream out;
  bp::child child;
};

Subprocess::Subprocess(const std::vector<std::string>& argv) : impl_(std::make_unique<Impl>()) {
  if (argv.empty()) throw Error("empty command");
  std::signal(SIGPIPE, SIG_IGN);  // a dead child must surface as a write error
  boost::filesystem::path exe = argv[0];
  if (argv[0].find('/') == std::string::npos) exe = bp::search_path(argv[0]);
  if (exe.empty() || !boost::filesystem::exists(exe)) throw Error("executable not found: " + argv[0]);
  std::vector<std::string> args(argv.begin() + 1, argv.end());
  try {
    impl_->child = bp::child(exe, bp::args(args), bp::std_in < impl_->in, bp::std_out > impl_->out,
                             bp::std_err > bp::null);
  } catch (const std::exception& e) {
    throw Error("cannot start " + argv[0] + ": " + e.what());
  }
}

Subprocess::~Subprocess() {
  if (!impl_) return;
  std::error_code ec;
  if (impl_->child.running(ec)) {
    impl_->in.close();
    impl_->in.pipe().close();
    // give the child a moment to exit on EOF, then kill it
    if (!impl_->child.wait_for(std::chrono::milliseconds(200), ec)) impl_->child.terminate(ec);
  }
  if (impl_->child.valid()) impl_->child.wait(ec);
}

void Subprocess::write(const std::string& text) {
  impl_->in << text;
  impl_->in.flush();
  if (!impl_->in) throw Error("write to child process failed");
}

bool Subprocess::read_line(std::string& line) { return static_cast<bool>(std::getline(impl_->out, line)); }

Subprocess::Read Subprocess::read_line(std::string& line, double timeout_seconds) {
  if (impl_->out.rdbuf()->in_avail() <= 0) {
    pollfd fd{impl_->out.pipe().native_source(), POLLIN, 0};
    const int ms = timeout_seconds <= 0 ? -1 : static_cast<int>(timeout_seconds * 1000);
    const int r = ::poll(&fd, 1, ms);
    if (r == 0) return Read::Timeout;
  }
  return read_line(line) ? Read::Line : Read::Eof;
}

void Subprocess::close_stdin() {
  impl_->in.close();
  impl_->in.pipe().close();
}

bool Subprocess::running() {
  std::error_code ec;
  return impl_->child.running(ec);
}

int Subprocess::wait() {
  std::error_code ec;
  impl_->child.wait(ec);
  return impl_->child.exit_code();
}

}  // namespace regrobust
