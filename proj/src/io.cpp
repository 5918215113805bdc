#include "latgas/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace latgas {

namespace {

std::runtime_error parse_error(const std::string& what) {
  return std::runtime_error("parse error: " + what);
}

// Next non-comment, non-blank line; false at end of input.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.ends_with('\r')) line.pop_back();
    return true;
  }
  return false;
}

void write_symbols_raw(std::ostream& out, const std::vector<Symbol>& cells) {
  out.write(reinterpret_cast<const char*>(cells.data()),
            static_cast<std::streamsize>(cells.size()));
}

void read_symbols_raw(std::istream& in, std::vector<Symbol>& cells) {
  in.read(reinterpret_cast<char*>(cells.data()),
          static_cast<std::streamsize>(cells.size()));
  if (in.gcount() != static_cast<std::streamsize>(cells.size()))
    throw parse_error("truncated cell payload");
}

}  // namespace

void write_trajectory_text(std::ostream& out, const Trajectory1D& traj,
                           const Alphabet& alphabet) {
  for (const auto& row : traj.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ' ';
      if (alphabet.is_blank(row[i]))
        out << '.';
      else
        out << static_cast<int>(row[i]);
    }
    out << '\n';
  }
}

Trajectory1D read_trajectory_text(std::istream& in, const Alphabet& alphabet) {
  Trajectory1D traj;
  std::string line;
  while (next_content_line(in, line)) {
    std::istringstream fields(line);
    std::vector<Symbol> row;
    std::string token;
    while (fields >> token) {
      if (token == ".") {
        row.push_back(alphabet.blank());
        continue;
      }
      int value = 0;
      try {
        value = std::stoi(token);
      } catch (const std::exception&) {
        throw parse_error("bad trajectory token `" + token + "`");
      }
      if (value < 0 || value >= alphabet.n_tiles)
        throw parse_error("tile id out of range in trajectory");
      row.push_back(static_cast<Symbol>(value));
    }
    if (!traj.rows.empty() && static_cast<int>(row.size()) != traj.length)
      throw parse_error("ragged trajectory rows");
    traj.length = static_cast<int>(row.size());
    traj.rows.push_back(std::move(row));
  }
  if (traj.rows.empty()) throw parse_error("empty trajectory");
  return traj;
}

void write_config3d(std::ostream& out, const Config3D& y) {
  out << y.extent_a << ' ' << y.extent_b << ' ' << y.length << '\n';
  write_symbols_raw(out, y.cells);
}

Config3D read_config3d(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw parse_error("missing `A B L` header");
  std::istringstream header(line);
  int A, B, L;
  if (!(header >> A >> B >> L) || A <= 0 || B <= 0 || L <= 0)
    throw parse_error("bad `A B L` header");
  Config3D y = Config3D::filled(A, B, L, 0, BoundaryI::unspecified());
  read_symbols_raw(in, y.cells);
  return y;
}

void write_spacetime(std::ostream& out, const SpaceTimeConfig& X) {
  out << X.extent_a << ' ' << X.extent_b << ' ' << X.length << ' ' << X.steps
      << '\n';
  switch (X.boundary_i.kind) {
    case BoundaryKindI::Periodic:
      out << "boundary-i periodic\n";
      break;
    case BoundaryKindI::FeedBlank:
      out << "boundary-i blank\n";
      break;
    case BoundaryKindI::FeedReference: {
      out << "boundary-i reference\nstream";
      // Persist exactly the window's share of the stream, cursor first,
      // so the reader reconstructs resolution with cursor 0.
      for (int t = 0; t < X.steps; ++t) {
        const std::size_t pos = X.boundary_i.cursor + static_cast<std::size_t>(t);
        if (pos >= X.boundary_i.stream.size())
          throw std::invalid_argument("write_spacetime: stream too short");
        out << ' ' << static_cast<int>(X.boundary_i.stream[pos]);
      }
      out << '\n';
      break;
    }
    case BoundaryKindI::Unspecified:
      out << "boundary-i unspecified\n";
      break;
  }
  out << "data\n";
  write_symbols_raw(out, X.cells);
}

SpaceTimeConfig read_spacetime(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line))
    throw parse_error("missing `A B L T` header");
  std::istringstream header(line);
  SpaceTimeConfig X;
  if (!(header >> X.extent_a >> X.extent_b >> X.length >> X.steps) ||
      X.extent_a <= 0 || X.extent_b <= 0 || X.length <= 0 || X.steps < 0)
    throw parse_error("bad `A B L T` header");

  X.boundary_i = BoundaryI::unspecified();
  bool saw_data = false;
  while (next_content_line(in, line)) {
    std::istringstream fields(line);
    std::string keyword;
    fields >> keyword;
    if (keyword == "data") {
      saw_data = true;
      break;
    }
    if (keyword == "boundary-i") {
      std::string kind;
      if (!(fields >> kind)) throw parse_error("missing boundary-i kind");
      if (kind == "periodic")
        X.boundary_i = BoundaryI::periodic();
      else if (kind == "blank")
        X.boundary_i = BoundaryI::feed_blank();
      else if (kind == "reference")
        X.boundary_i = BoundaryI::feed_reference({});
      else if (kind == "unspecified")
        X.boundary_i = BoundaryI::unspecified();
      else
        throw parse_error("unknown boundary-i kind `" + kind + "`");
    } else if (keyword == "stream") {
      int value;
      while (fields >> value) {
        if (value < 0 || value > 255) throw parse_error("stream symbol out of range");
        X.boundary_i.stream.push_back(static_cast<Symbol>(value));
      }
    } else {
      throw parse_error("unknown header line `" + keyword + "`");
    }
  }
  if (!saw_data) throw parse_error("missing `data` line");
  if (X.boundary_i.kind == BoundaryKindI::FeedReference &&
      static_cast<int>(X.boundary_i.stream.size()) < X.steps)
    throw parse_error("reference stream shorter than the window");

  X.cells.resize(static_cast<std::size_t>(X.steps + 1) * X.slice_volume());
  read_symbols_raw(in, X.cells);
  return X;
}

void write_patch(std::ostream& out, const Patch& patch) {
  out << patch.width << ' ' << patch.height << '\n';
  for (int r = 0; r < patch.height; ++r) {
    for (int c = 0; c < patch.width; ++c) {
      if (c) out << ' ';
      out << static_cast<int>(patch.at(r, c));
    }
    out << '\n';
  }
}

Patch read_patch(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line))
    throw parse_error("missing `width height` header");
  std::istringstream header(line);
  Patch patch;
  if (!(header >> patch.width >> patch.height) || patch.width <= 0 ||
      patch.height <= 0)
    throw parse_error("bad `width height` header");
  patch.cells.reserve(static_cast<std::size_t>(patch.width) * patch.height);
  for (int r = 0; r < patch.height; ++r) {
    if (!next_content_line(in, line)) throw parse_error("missing patch row");
    std::istringstream fields(line);
    int value;
    int seen = 0;
    while (fields >> value) {
      if (value < 0 || value > 255) throw parse_error("tile id out of range");
      patch.cells.push_back(static_cast<TileId>(value));
      ++seen;
    }
    if (seen != patch.width) throw parse_error("ragged patch row");
  }
  return patch;
}

void write_csv(std::ostream& out, MetaKv meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::sort(meta.begin(), meta.end());
  for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("write_csv: row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
}

std::string fmt_g12(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace latgas
