#include "regrobust/oracle.hpp"

#include <boost/asio.hpp>
#include <chrono>

#include "regrobust/errors.hpp"
#include "regrobust/process.hpp"
#include "regrobust/serialize.hpp"

namespace regrobust {

namespace asio = boost::asio;

bool Oracle::label(const Sequence& w) {
  ++lookups_;
  auto it = cache_.find(w);
  if (it != cache_.end()) return it->second;
  const bool l = query(w);
  ++queries_;
  cache_.emplace(w, l);
  return l;
}

void Oracle::clear_cache() { cache_.clear(); }

bool DraOracle::query(const Sequence& w) { return accepts(dra_, w); }

std::string handshake_line() { return json{{"protocol", kOracleProtocol}}.dump(); }

std::string request_line(std::uint64_t id, const Sequence& w) {
  return json{{"id", id}, {"seq", sequence_to_json(w)}}.dump();
}

bool parse_response(const std::string& line, std::uint64_t expected_id) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    throw OracleUnavailable("oracle: malformed response: " + line);
  }
  if (!j.is_object()) throw OracleUnavailable("oracle: response is not an object: " + line);
  if (j.contains("error")) throw OracleUnavailable("oracle error: " + j["error"].dump());
  if (!j.contains("id") || !j["id"].is_number_unsigned() || j["id"].get<std::uint64_t>() != expected_id)
    throw OracleUnavailable("oracle: response id does not match request " + std::to_string(expected_id));
  if (!j.contains("label") || !j["label"].is_number_integer())
    throw OracleUnavailable("oracle: response without a 0/1 label: " + line);
  const auto l = j["label"].get<std::int64_t>();
  if (l != 0 && l != 1) throw OracleUnavailable("oracle: label must be 0 or 1: " + line);
  return l == 1;
}

std::string serve_line(const std::string& line, const std::function<bool(const Sequence&)>& classify) {
  auto error = [](const std::string& msg) { return json{{"error", msg}}.dump(); };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    return error("malformed JSON");
  }
  if (!j.is_object()) return error("request must be an object");
  if (j.contains("protocol")) {
    if (j["protocol"] == kOracleProtocol) return handshake_line();
    return error("unsupported protocol");
  }
  if (!j.contains("id") || !j["id"].is_number_unsigned()) return error("request needs an unsigned integer id");
  if (!j.contains("seq") || !j["seq"].is_array()) return error("request needs a seq array");
  try {
    const Sequence w = sequence_from_json(j["seq"], "seq");
    return json{{"id", j["id"]}, {"label", classify(w) ? 1 : 0}}.dump();
  } catch (const std::exception& e) {
    return json{{"id", j["id"]}, {"error", e.what()}}.dump();
  }
}

void LineOracle::handshake() {
  send_line(handshake_line());
  const std::string reply = recv_line();
  json j;
  try {
    j = json::parse(reply);
  } catch (const json::exception&) {
    throw OracleUnavailable("oracle: malformed handshake reply: " + reply);
  }
  if (!j.is_object() || !j.contains("protocol") || j["protocol"] != kOracleProtocol)
    throw OracleUnavailable("oracle: handshake refused: " + reply);
}

bool LineOracle::query(const Sequence& w) {
  const std::uint64_t id = next_id_++;
  send_line(request_line(id, w));
  return parse_response(recv_line(), id);
}

// --- stdio -------------------------------------------------------------------

struct StdioOracle::Impl {
  explicit Impl(const std::vector<std::string>& argv) : proc(argv) {}
  Subprocess proc;
};

StdioOracle::StdioOracle(const std::string& command, ProtocolOptions opts) : LineOracle(opts) {
  try {
    impl_ = std::make_unique<Impl>(split_command(command));
  } catch (const Error& e) {
    throw OracleUnavailable(std::string("cannot start oracle: ") + e.what());
  }
  handshake();
}

StdioOracle::~StdioOracle() = default;

void StdioOracle::send_line(const std::string& line) {
  try {
    impl_->proc.write(line + "\n");
  } catch (const Error& e) {
    throw OracleUnavailable(std::string("oracle: ") + e.what());
  }
}

std::string StdioOracle::recv_line() {
  std::string line;
  switch (impl_->proc.read_line(line, opts_.timeout)) {
    case Subprocess::Read::Line: return line;
    case Subprocess::Read::Eof: throw OracleUnavailable("oracle process closed its output");
    case Subprocess::Read::Timeout: break;
  }
  throw OracleUnavailable("oracle did not answer within " + std::to_string(opts_.timeout) + " s");
}

// --- tcp ---------------------------------------------------------------------

struct TcpOracle::Impl {
  asio::io_context io;
  asio::ip::tcp::socket socket{io};
  asio::streambuf buffer;

  // Runs the pending operation; false when the deadline passed first.
  bool run_for(double seconds) {
    io.restart();
    if (seconds <= 0) {
      io.run();
      return true;
    }
    io.run_for(std::chrono::milliseconds(static_cast<long long>(seconds * 1000)));
    if (io.stopped()) return true;
    boost::system::error_code ec;
    socket.cancel(ec);
    io.restart();
    io.run();
    return false;
  }
};

TcpOracle::TcpOracle(const std::string& host, const std::string& port, ProtocolOptions opts)
    : LineOracle(opts), impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  asio::ip::tcp::resolver resolver(impl_->io);
  auto endpoints = resolver.resolve(host, port, ec);
  if (ec) throw OracleUnavailable("cannot resolve " + host + ":" + port + ": " + ec.message());
  boost::system::error_code conn_ec = asio::error::would_block;
  asio::async_connect(impl_->socket, endpoints,
                      [&](const boost::system::error_code& e, const asio::ip::tcp::endpoint&) { conn_ec = e; });
  if (!impl_->run_for(opts_.timeout) || conn_ec)
    throw OracleUnavailable("cannot connect to " + host + ":" + port +
                            (conn_ec ? ": " + conn_ec.message() : std::string(": timeout")));
  handshake();
}

TcpOracle::~TcpOracle() = default;

void TcpOracle::send_line(const std::string& line) {
  boost::system::error_code ec;
  asio::write(impl_->socket, asio::buffer(line + "\n"), ec);
  if (ec) throw OracleUnavailable("oracle connection: " + ec.message());
}

std::string TcpOracle::recv_line() {
  boost::system::error_code ec = asio::error::would_block;
  std::size_t n = 0;
  asio::async_read_until(impl_->socket, impl_->buffer, '\n', [&](const boost::system::error_code& e, std::size_t k) {
    ec = e;
    n = k;
  });
  if (!impl_->run_for(opts_.timeout))
    throw OracleUnavailable("oracle did not answer within " + std::to_string(opts_.timeout) + " s");
  if (ec) throw OracleUnavailable("oracle connection: " + ec.message());
  std::string line(asio::buffers_begin(impl_->buffer.data()), asio::buffers_begin(impl_->buffer.data()) + n);
  impl_->buffer.consume(n);
  if (!line.empty() && line.back() == '\n') line.pop_back();
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::unique_ptr<Oracle> make_oracle(const std::string& spec, ProtocolOptions opts) {
  if (spec.rfind("dra:", 0) == 0) return std::make_unique<DraOracle>(load_dra(spec.substr(4)));
  if (spec.rfind("tcp:", 0) == 0) {
    const std::string rest = spec.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size())
      throw InvalidArgument("tcp oracle must be given as tcp:HOST:PORT");
    return std::make_unique<TcpOracle>(rest.substr(0, colon), rest.substr(colon + 1), opts);
  }
  if (spec.empty()) throw InvalidArgument("empty oracle argument");
  return std::make_unique<StdioOracle>(spec, opts);
}

}  // namespace regrobust
