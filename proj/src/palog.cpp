#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pacp/errors.hpp"
#include "pacp/graph.hpp"

namespace pacp {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t parse_int(std::string_view tok, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::MalformedLog, "line " + std::to_string(line_no) +
                                             ": expected an integer, got '" +
                                             std::string(tok) + "'");
  }
  return value;
}

std::int64_t parse_field(std::string_view tok, std::string_view key) {
  if (tok.substr(0, key.size()) != key) {
    throw Error(ErrorKind::MalformedLog, "PALOG header: expected field " + std::string(key));
  }
  return parse_int(tok.substr(key.size()), 1);
}

}  // namespace

AttachmentLog read_palog(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::MalformedLog, "empty PALOG input");
  const auto head = split_ws(line);
  if (head.size() != 4 || head[0] != "PALOG" || head[1] != "v1") {
    throw Error(ErrorKind::MalformedLog, "PALOG header must read 'PALOG v1 n=<n> m=<m>'");
  }
  const std::int64_t n = parse_field(head[2], "n=");
  const std::int64_t m = parse_field(head[3], "m=");
  require(n >= 1 && m >= 1 && m <= 1'000'000, ErrorKind::MalformedLog,
          "PALOG header requires n >= 1 and m >= 1");

  std::vector<std::vector<Vertex>> rows;
  rows.reserve(static_cast<std::size_t>(n - 1));
  std::int64_t expected = 2;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::int64_t t = parse_int(tok[0], line_no);
    if (t < expected) {
      throw Error(ErrorKind::MalformedLog, "line " + std::to_string(line_no) +
                                               ": duplicate or out-of-order arrival " +
                                               std::to_string(t));
    }
    if (t > n) {
      throw Error(ErrorKind::MalformedLog, "line " + std::to_string(line_no) +
                                               ": arrival " + std::to_string(t) +
                                               " exceeds n");
    }
    if (t > expected) {
      throw Error(ErrorKind::MissingRow, "missing row for arrival " + std::to_string(expected));
    }
    if (static_cast<std::int64_t>(tok.size()) - 1 != m) {
      throw Error(ErrorKind::WrongOutDegree, "arrival " + std::to_string(t) + " has " +
                                                 std::to_string(tok.size() - 1) +
                                                 " targets, expected " + std::to_string(m));
    }
    std::vector<Vertex> row;
    row.reserve(static_cast<std::size_t>(m));
    for (std::size_t k = 1; k < tok.size(); ++k) row.push_back(parse_int(tok[k], line_no));
    rows.push_back(std::move(row));
    ++expected;
  }
  if (expected <= n) {
    throw Error(ErrorKind::MissingRow, "missing row for arrival " + std::to_string(expected));
  }
  return AttachmentLog::from_rows(n, static_cast<int>(m), rows);
}

AttachmentLog read_palog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open PALOG file: " + path);
  return read_palog(in);
}

void write_palog(std::ostream& out, const AttachmentLog& g) {
  out << "PALOG v1 n=" << g.n() << " m=" << g.m() << '\n';
  for (std::int64_t t = 2; t <= g.n(); ++t) {
    out << t;
    for (const Vertex v : g.row(t)) out << ' ' << v;
    out << '\n';
  }
}

std::string to_palog(const AttachmentLog& g) {
  std::ostringstream os;
  write_palog(os, g);
  return os.str();
}

}  // namespace pacp
