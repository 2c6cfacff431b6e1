#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridtrust/core.hpp"

namespace gridtrust {

// One row per observable simulator event. Trust updates carry the full
// evaluation breakdown; other kinds describe themselves in `detail`
// (which never contains commas, so the CSV stays trivially parseable).
enum class TraceKind {
  Arrival,
  Allocation,
  Rejected,
  Verdict,
  Discard,
  TrustUpdate,
  Sweep,
  Membership,
  Receipt,
  Join,
  SecurityUpdate,
};

inline const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Arrival: return "arrival";
    case TraceKind::Allocation: return "allocation";
    case TraceKind::Rejected: return "rejected";
    case TraceKind::Verdict: return "verdict";
    case TraceKind::Discard: return "discard";
    case TraceKind::TrustUpdate: return "trust_update";
    case TraceKind::Sweep: return "sweep";
    case TraceKind::Membership: return "membership";
    case TraceKind::Receipt: return "receipt";
    case TraceKind::Join: return "join";
    case TraceKind::SecurityUpdate: return "security_update";
  }
  return "?";
}

struct TraceRow {
  SimTime time = 0.0;
  TraceKind kind = TraceKind::Arrival;
  NodeId node = 0;
  double s = 0.0;
  double re = 0.0;
  double sd = 0.0;
  double tv = 0.0;
  double t_new = 0.0;
  std::uint64_t n = 0;
  std::string detail;
};

// A rectified feedback parameter: the submitted value and what replaced it.
struct RectificationEvent {
  TxId tx = 0;
  NodeId provider = 0;
  std::size_t param = 0;
  double original = 0.0;
  double replaced_with = 0.0;
};

struct Counters {
  std::uint64_t arrivals = 0;
  std::uint64_t allocations = 0;
  std::uint64_t rejected = 0;
  std::uint64_t feedback_scheduled = 0;
  std::uint64_t feedback_received = 0;
  std::uint64_t feedback_verified = 0;
  std::uint64_t feedback_rectified = 0;
  std::uint64_t feedback_discarded = 0;
  std::uint64_t trust_updates = 0;
  std::uint64_t sweep_updates = 0;
  std::uint64_t denied_requests = 0;
  std::uint64_t elections = 0;
};

class MetricsTrace {
 public:
  void record(TraceRow row) { rows_.push_back(std::move(row)); }

  void event(SimTime t, TraceKind kind, NodeId node, std::string detail) {
    TraceRow row;
    row.time = t;
    row.kind = kind;
    row.node = node;
    row.detail = std::move(detail);
    rows_.push_back(std::move(row));
  }

  void trust_update(SimTime t, NodeId node, double s, double re, double sd, double tv,
                    double t_new, std::uint64_t n, bool sweep = false, std::string detail = {}) {
    TraceRow row;
    row.time = t;
    row.kind = sweep ? TraceKind::Sweep : TraceKind::TrustUpdate;
    row.node = node;
    row.s = s;
    row.re = re;
    row.sd = sd;
    row.tv = tv;
    row.t_new = t_new;
    row.n = n;
    row.detail = std::move(detail);
    rows_.push_back(std::move(row));
  }

  void rectification(RectificationEvent ev) { rectifications_.push_back(ev); }

  const std::vector<TraceRow>& rows() const { return rows_; }
  const std::vector<RectificationEvent>& rectifications() const { return rectifications_; }
  Counters& counters() { return counters_; }
  const Counters& counters() const { return counters_; }

  void log(SimTime t, const std::string& line) {
    char head[64];
    std::snprintf(head, sizeof(head), "[%10.4f] ", t);
    log_.push_back(head + line);
  }
  const std::vector<std::string>& log_lines() const { return log_; }

  static std::string csv_header() { return "time,kind,node,s,re,sd,tv,t_new,n,detail"; }

  std::string to_csv() const {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows_) {
      out += format_real(r.time);
      out += ',';
      out += to_string(r.kind);
      out += ',';
      out += std::to_string(r.node);
      out += ',';
      out += format_real(r.s);
      out += ',';
      out += format_real(r.re);
      out += ',';
      out += format_real(r.sd);
      out += ',';
      out += format_real(r.tv);
      out += ',';
      out += format_real(r.t_new);
      out += ',';
      out += std::to_string(r.n);
      out += ',';
      out += r.detail;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<TraceRow> rows_;
  std::vector<RectificationEvent> rectifications_;
  Counters counters_;
  std::vector<std::string> log_;
};

inline TraceKind trace_kind_from(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(TraceKind::SecurityUpdate); ++k) {
    if (s == to_string(static_cast<TraceKind>(k))) return static_cast<TraceKind>(k);
  }
  throw GridError(Errc::ParseError, "unknown trace kind '" + s + "'");
}

// Parses a trace CSV produced by MetricsTrace::to_csv (or an equivalent file).
inline std::vector<TraceRow> parse_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw GridError(Errc::ParseError, "empty trace");
  if (line != MetricsTrace::csv_header()) {
    throw GridError(Errc::SchemaMismatch, "unexpected trace header: " + line);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (cells.size() < 9 && std::getline(ss, cell, ',')) cells.push_back(cell);
    std::string rest;
    std::getline(ss, rest);
    cells.push_back(rest);
    if (cells.size() != 10) {
      throw GridError(Errc::ParseError,
                      "trace line " + std::to_string(lineno) + ": expected 10 cells");
    }
    TraceRow r;
    try {
      r.time = std::stod(cells[0]);
      r.kind = trace_kind_from(cells[1]);
      r.node = static_cast<NodeId>(std::stoul(cells[2]));
      r.s = std::stod(cells[3]);
      r.re = std::stod(cells[4]);
      r.sd = std::stod(cells[5]);
      r.tv = std::stod(cells[6]);
      r.t_new = std::stod(cells[7]);
      r.n = std::stoull(cells[8]);
    } catch (const std::exception&) {
      throw GridError(Errc::ParseError, "trace line " + std::to_string(lineno) + ": bad value");
    }
    r.detail = cells[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<TraceRow> parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridError(Errc::IoError, "cannot open trace file " + path);
  return parse_trace_csv(in);
}

}  // namespace gridtrust
