#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wlcanon/graph.hpp"

namespace wlcanon {

enum class GraphFormat { edgelist, graph6 };

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line, std::size_t byte = 0)
      : std::runtime_error(what + " (line " + std::to_string(line) +
                           (byte ? ", byte " + std::to_string(byte) : "") + ")"),
        line(line),
        byte(byte) {}
  std::size_t line;
  std::size_t byte;
};

// ---------------------------------------------------------------------------
// Edge list: optional first line "p <n> <m>"; lines "<u> <v>" with 0-based
// ids; '#' starts a comment. Without a header, n = max id + 1.
// ---------------------------------------------------------------------------

inline Graph parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  bool have_header = false;
  std::uint64_t header_n = 0, header_m = 0;
  std::size_t lineno = 0;
  std::uint64_t max_id = 0;
  bool any_vertex = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream ss{std::string(line)};
    std::string tok;
    if (ss >> tok) {
      if (tok == "p") {
        if (have_header || !edges.empty())
          throw ParseError("unexpected header line", lineno);
        if (!(ss >> header_n >> header_m)) throw ParseError("malformed header", lineno);
        have_header = true;
      } else {
        std::uint64_t u = 0, v = 0;
        try {
          std::size_t used = 0;
          u = std::stoull(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw ParseError("malformed token '" + tok + "'", lineno);
        }
        std::string tok2;
        if (!(ss >> tok2)) throw ParseError("missing second endpoint", lineno);
        try {
          std::size_t used = 0;
          v = std::stoull(tok2, &used);
          if (used != tok2.size()) throw std::invalid_argument(tok2);
        } catch (const std::exception&) {
          throw ParseError("malformed token '" + tok2 + "'", lineno);
        }
        std::string extra;
        if (ss >> extra) throw ParseError("trailing token '" + extra + "'", lineno);
        if (u == v) throw ParseError("self-loop", lineno);
        max_id = std::max(max_id, std::max(u, v));
        any_vertex = true;
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  std::uint64_t n = have_header ? header_n : (any_vertex ? max_id + 1 : 0);
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw ParseError("vertex count too large", 1);
  if (any_vertex && max_id >= n) throw ParseError("vertex id exceeds declared n", 1);
  if (have_header && edges.size() != header_m)
    throw ParseError("edge count does not match header", lineno);
  try {
    return Graph::from_edges(static_cast<std::uint32_t>(n), edges);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno);
  }
}

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "p " << g.n() << " " << g.m() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// graph6: standard 6-bit encoding; optional ">>graph6<<" header. Bits cover
// the upper triangle in column order (0,1),(0,2),(1,2),(0,3),...
// ---------------------------------------------------------------------------

inline std::string write_graph6(const Graph& g) {
  const std::uint32_t n = g.n();
  if (n > 258047) throw std::invalid_argument("graph6: n > 258047 unsupported");
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else {
    out.push_back(126);
    out.push_back(static_cast<char>(((n >> 12) & 0x3f) + 63));
    out.push_back(static_cast<char>(((n >> 6) & 0x3f) + 63));
    out.push_back(static_cast<char>((n & 0x3f) + 63));
  }
  std::uint32_t acc = 0, bits = 0;
  for (Vertex j = 1; j < n; ++j) {
    for (Vertex i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, j) ? 1u : 0u);
      if (++bits == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = 0;
        bits = 0;
      }
    }
  }
  if (bits > 0) out.push_back(static_cast<char>((acc << (6 - bits)) + 63));
  return out;
}

inline Graph parse_graph6(std::string_view text) {
  // Strip optional header and trailing whitespace.
  constexpr std::string_view header = ">>graph6<<";
  if (text.substr(0, header.size()) == header) text.remove_prefix(header.size());
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
    text.remove_suffix(1);
  if (text.empty()) throw ParseError("graph6: empty input", 1);

  std::size_t pos = 0;
  auto need = [&](std::size_t k) {
    if (pos + k > text.size()) throw ParseError("graph6: truncated input", 1, pos);
  };
  auto val = [&](std::size_t at) -> std::uint32_t {
    unsigned char c = static_cast<unsigned char>(text[at]);
    if (c < 63 || c > 126) throw ParseError("graph6: invalid byte", 1, at);
    return c - 63;
  };

  std::uint64_t n = 0;
  if (text[0] == 126) {
    if (text.size() >= 2 && text[1] == 126)
      throw ParseError("graph6: n >= 258048 unsupported", 1, 0);
    need(4);
    n = (static_cast<std::uint64_t>(val(1)) << 12) | (val(2) << 6) | val(3);
    pos = 4;
  } else {
    n = val(0);
    pos = 1;
  }

  const std::uint64_t nbits = n * (n - 1) / 2;
  const std::uint64_t nbytes = (nbits + 5) / 6;
  if (text.size() - pos != nbytes)
    throw ParseError("graph6: body length mismatch", 1, pos);

  std::vector<Edge> edges;
  std::uint64_t bit = 0;
  for (Vertex j = 1; j < n; ++j) {
    for (Vertex i = 0; i < j; ++i, ++bit) {
      std::uint32_t v = val(pos + bit / 6);
      if ((v >> (5 - bit % 6)) & 1u) edges.emplace_back(i, static_cast<Vertex>(j));
    }
  }
  // Padding bits must be zero.
  for (std::uint64_t b = nbits; b < nbytes * 6; ++b)
    if ((val(pos + b / 6) >> (5 - b % 6)) & 1u)
      throw ParseError("graph6: nonzero padding", 1, pos + b / 6);
  return Graph::from_edges(static_cast<std::uint32_t>(n), edges);
}

inline Graph read_graph(const std::string& path, GraphFormat fmt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return fmt == GraphFormat::edgelist ? parse_edge_list(buf.str()) : parse_graph6(buf.str());
}

inline void write_graph(const Graph& g, const std::string& path, GraphFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << (fmt == GraphFormat::edgelist ? write_edge_list(g) : write_graph6(g) + "\n");
}

}  // namespace wlcanon
