#pragma once

// Shared scalar types and error classes used across the library.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latgas {

// A cell value: either a tile id (0..n-1) or the blank symbol (id n).
// Tile sets are capped at 255 tiles so a symbol always fits in a byte,
// which keeps configuration dumps trivially portable.
using Symbol = std::uint8_t;
using TileId = std::uint8_t;
using Color = std::uint16_t;

inline constexpr int kMaxTiles = 255;

// A space-time lattice site: torus coordinates (a, b), line position i,
// time t.
struct Cell4 {
  int a = 0, b = 0, i = 0, t = 0;

  auto operator<=>(const Cell4&) const = default;
};

// Raised by tile-set parsing and lookup. The code disambiguates failure
// modes that tests and the CLI treat differently.
class TilesetError : public std::runtime_error {
 public:
  enum class Code {
    EmptySet,       // no tiles in the input
    DuplicateTile,  // two tiles with identical (north,east,south,west)
    MalformedLine,  // line does not parse as five integers
    BadId,          // ids not consecutive from 0, or out of range
    TooManyTiles,   // more than kMaxTiles tiles
    UnknownName,    // named fixture does not exist
    Io,             // file could not be opened
  };

  TilesetError(Code code, std::string message)
      : std::runtime_error(std::move(message)), code(code) {}

  Code code;
};

// A boundary feed ran out of symbols before the run finished.
class StreamExhausted : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A factor or neighborhood reaches cells the window cannot resolve
// (outside the time range, or across an unspecified i-boundary).
class TruncatedSupport : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace latgas
