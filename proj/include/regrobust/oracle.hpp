#pragma once

// Membership oracles: an in-process Dra, an arbitrary function, or an
// external classifier speaking the regrobust-oracle/1 line protocol.
//
// Wire protocol (one JSON object per line, both directions):
//   client -> {"protocol":"regrobust-oracle/1"}   server -> same object
//   client -> {"id":7,"seq":["1/2","-3/1"]}       server -> {"id":7,"label":1}
// A server answers malformed requests with {"error":"..."} and keeps going.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "regrobust/automata.hpp"

namespace regrobust {

inline constexpr const char* kOracleProtocol = "regrobust-oracle/1";

class Oracle {
 public:
  virtual ~Oracle() = default;
  // Labels are cached per sequence, so repeated questions get one answer.
  bool label(const Sequence& w);
  std::size_t queries() const { return queries_; }  // distinct sequences asked
  std::size_t lookups() const { return lookups_; }  // label() calls
  void clear_cache();

 protected:
  virtual bool query(const Sequence& w) = 0;

 private:
  std::map<Sequence, bool> cache_;
  std::size_t queries_ = 0;
  std::size_t lookups_ = 0;
};

class DraOracle : public Oracle {
 public:
  explicit DraOracle(Dra dra) : dra_(std::move(dra)) {}
  const Dra& dra() const { return dra_; }

 protected:
  bool query(const Sequence& w) override;

 private:
  Dra dra_;
};

class FunctionOracle : public Oracle {
 public:
  explicit FunctionOracle(std::function<bool(const Sequence&)> f) : f_(std::move(f)) {}

 protected:
  bool query(const Sequence& w) override { return f_(w); }

 private:
  std::function<bool(const Sequence&)> f_;
};

struct ProtocolOptions {
  double timeout = 10;  // seconds per response
};

// Client side of the line protocol over some transport.
class LineOracle : public Oracle {
 protected:
  explicit LineOracle(ProtocolOptions opts) : opts_(opts) {}
  virtual void send_line(const std::string& line) = 0;
  // Throws OracleUnavailable on EOF or timeout.
  virtual std::string recv_line() = 0;
  void handshake();
  bool query(const Sequence& w) override;
  ProtocolOptions opts_;

 private:
  std::uint64_t next_id_ = 1;
};

class StdioOracle : public LineOracle {
 public:
  StdioOracle(const std::string& command, ProtocolOptions opts = {});
  ~StdioOracle() override;

 protected:
  void send_line(const std::string& line) override;
  std::string recv_line() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class TcpOracle : public LineOracle {
 public:
  TcpOracle(const std::string& host, const std::string& port, ProtocolOptions opts = {});
  ~TcpOracle() override;

 protected:
  void send_line(const std::string& line) override;
  std::string recv_line() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "dra:FILE" (in-process), "tcp:HOST:PORT", or a command line for stdio.
std::unique_ptr<Oracle> make_oracle(const std::string& spec, ProtocolOptions opts = {});

std::string handshake_line();
std::string request_line(std::uint64_t id, const Sequence& w);
// Label from a response line; throws OracleUnavailable on an error object,
// a wrong id or a malformed line.
bool parse_response(const std::string& line, std::uint64_t expected_id);

// Server side: the reply to one request line. Never throws.
std::string serve_line(const std::string& line, const std::function<bool(const Sequence&)>& classify);

}  // namespace regrobust
