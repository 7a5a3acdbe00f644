#pragma once

#include <string>
#include <string_view>

#include "catlab/spaces/grid_disc.hpp"
#include "catlab/spaces/metric_graph.hpp"

namespace catlab::spaces {

// Plain-text space descriptors. Blank lines and '#' comments are ignored.
//
//   v <id> [x y]          vertex; ids must be 0, 1, 2, ... in order
//   e <id> <id> <weight>  undirected edge
//
//   grid h=<h> r=<r> factor=<expression>   all nodes of the disc, factor sampled
//   grid h=<h> r=<r> factor=table          followed by one line per node:
//   phi <i> <j> <value>                    node at (i h, j h)
//
// Writers emit the table form with shortest round-trip numbers, so
// write(read(text)) is byte-stable after the first normalization.

std::string write_graph(const MetricGraph& graph);
/// Throws ParseError naming the line.
MetricGraph read_graph(std::string_view text);

std::string write_grid(const GridDisc& grid);
GridDisc read_grid(std::string_view text);

}  // namespace catlab::spaces
