#include "catlab/spaces/text_io.hpp"

#include <sstream>
#include <vector>

#include "catlab/error.hpp"
#include "catlab/format.hpp"
#include "catlab/spaces/expression.hpp"
#include "detail/text_lines.hpp"

namespace catlab::spaces {

using detail::for_each_line;
using detail::integer;
using detail::number;
using detail::parse_fail;
using detail::split_ws;

std::string write_graph(const MetricGraph& graph) {
  std::string out;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    out += "v " + std::to_string(v);
    if (graph.has_position(v)) {
      const Vec2 p = graph.position(v);
      out += ' ' + format_double(p.x) + ' ' + format_double(p.y);
    }
    out += '\n';
  }
  for (const Edge& e : graph.edges()) {
    out += "e " + std::to_string(e.a) + ' ' + std::to_string(e.b) + ' ' + format_double(e.weight) + '\n';
  }
  return out;
}

MetricGraph read_graph(std::string_view text) {
  MetricGraph::Builder builder;
  VertexId next_id = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tok = split_ws(line);
    if (tok[0] == "v") {
      if (tok.size() != 2 && tok.size() != 4) parse_fail(line_no, "expected 'v <id> [x y]'");
      const auto id = integer<VertexId>(line_no, tok[1]);
      if (id != next_id) parse_fail(line_no, "vertex ids must be consecutive from 0");
      ++next_id;
      if (tok.size() == 4) {
        builder.add_vertex({number(line_no, tok[2]), number(line_no, tok[3])});
      } else {
        builder.add_vertex();
      }
    } else if (tok[0] == "e") {
      if (tok.size() != 4) parse_fail(line_no, "expected 'e <id> <id> <weight>'");
      try {
        builder.add_edge(integer<VertexId>(line_no, tok[1]), integer<VertexId>(line_no, tok[2]),
                         number(line_no, tok[3]));
      } catch (const Error& err) {
        if (err.code() == ErrorCode::ParseError) throw;
        parse_fail(line_no, err.what());
      }
    } else {
      parse_fail(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  });
  return std::move(builder).build();
}

std::string write_grid(const GridDisc& grid) {
  std::string out = "grid h=" + format_double(grid.spacing()) + " r=" + format_double(grid.domain_radius()) +
                    " factor=table\n";
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const GridNode n = grid.nodes()[k];
    out += "phi " + std::to_string(n.i) + ' ' + std::to_string(n.j) + ' ' + format_double(grid.factor()[k]) + '\n';
  }
  return out;
}

GridDisc read_grid(std::string_view text) {
  bool have_header = false;
  bool table = false;
  double h = 0.0, r = 0.0;
  std::string expr;
  std::size_t header_line = 0;
  std::vector<GridNode> nodes;
  std::vector<double> values;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tok = split_ws(line);
    if (tok[0] == "grid") {
      if (have_header) parse_fail(line_no, "duplicate grid header");
      have_header = true;
      header_line = line_no;
      bool have_h = false, have_r = false, have_f = false;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const std::size_t eq = tok[i].find('=');
        if (eq == std::string_view::npos) parse_fail(line_no, "expected key=value");
        const std::string_view key = tok[i].substr(0, eq);
        const std::string_view val = tok[i].substr(eq + 1);
        if (key == "h") {
          h = number(line_no, val);
          have_h = true;
        } else if (key == "r") {
          r = number(line_no, val);
          have_r = true;
        } else if (key == "factor") {
          // The expression may contain blanks; it runs to the end of the line.
          const std::size_t at = static_cast<std::size_t>(val.data() - line.data());
          expr = std::string(line.substr(at));
          have_f = true;
          break;
        } else {
          parse_fail(line_no, "unknown grid key '" + std::string(key) + "'");
        }
      }
      if (!have_h || !have_r || !have_f) parse_fail(line_no, "grid header needs h=, r= and factor=");
      while (!expr.empty() && (expr.back() == ' ' || expr.back() == '\t')) expr.pop_back();
      table = expr == "table";
    } else if (tok[0] == "phi") {
      if (!have_header || !table) parse_fail(line_no, "'phi' records need a 'factor=table' grid header");
      if (tok.size() != 4) parse_fail(line_no, "expected 'phi <i> <j> <value>'");
      nodes.push_back({integer<int>(line_no, tok[1]), integer<int>(line_no, tok[2])});
      values.push_back(number(line_no, tok[3]));
    } else {
      parse_fail(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  });
  if (!have_header) raise(ErrorCode::ParseError, "missing grid header");
  try {
    if (table) return GridDisc::from_nodes(h, r, std::move(nodes), std::move(values));
    const Expression factor = Expression::parse(expr);
    return GridDisc::sample(h, r, [&](double x, double y) { return factor(x, y); });
  } catch (const Error& err) {
    if (err.code() == ErrorCode::NonPositiveFactor) throw;
    parse_fail(header_line, err.what());
  }
}

}  // namespace catlab::spaces
