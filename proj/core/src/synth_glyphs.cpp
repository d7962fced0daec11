#include <array>
#include <span>

#include "digits/datasets.hpp"
#include "digits/error.hpp"

namespace digits {

namespace {

using Glyph = std::array<const char*, 16>;

// clang-format off
constexpr std::array<Glyph, kNumClasses> kGlyphs{{
  {  // 0
    "................",
    ".....######.....",
    "....########....",
    "...##......##...",
    "...##......##...",
    "..##........##..",
    "..##........##..",
    "..##........##..",
    "..##........##..",
    "..##........##..",
    "..##........##..",
    "...##......##...",
    "...##......##...",
    "....########....",
    ".....######.....",
    "................",
  },
  {  // 1
    "................",
    "........##......",
    ".......###......",
    "......####......",
    ".....##.##......",
    "........##......",
    "........##......",
    "........##......",
    "........##......",
    "........##......",
    "........##......",
    "........##......",
    "........##......",
    ".....########...",
    ".....########...",
    "................",
  },
  {  // 2
    "................",
    "....#######.....",
    "...#########....",
    "..##.......##...",
    "...........##...",
    "...........##...",
    "..........##....",
    ".........##.....",
    "........##......",
    ".......##.......",
    "......##........",
    ".....##.........",
    "....##..........",
    "...###########..",
    "...###########..",
    "................",
  },
  {  // 3
    "................",
    "...########.....",
    "...#########....",
    "...........##...",
    "...........##...",
    "...........##...",
    "..........##....",
    "......#####.....",
    "......#####.....",
    "..........##....",
    "...........##...",
    "...........##...",
    "...........##...",
    "...#########....",
    "...########.....",
    "................",
  },
  {  // 4
    "................",
    ".........##.....",
    "........###.....",
    ".......####.....",
    "......##.##.....",
    ".....##..##.....",
    "....##...##.....",
    "...##....##.....",
    "..##.....##.....",
    "..############..",
    "..############..",
    ".........##.....",
    ".........##.....",
    ".........##.....",
    ".........##.....",
    "................",
  },
  {  // 5
    "................",
    "...##########...",
    "...##########...",
    "...##...........",
    "...##...........",
    "...##...........",
    "...########.....",
    "...#########....",
    "...........##...",
    "...........##...",
    "...........##...",
    "...........##...",
    "..##.......##...",
    "...#########....",
    "....#######.....",
    "................",
  },
  {  // 6
    "................",
    "........####....",
    "......###.......",
    ".....##.........",
    "....##..........",
    "...##...........",
    "...##.######....",
    "...##########...",
    "...###.....##...",
    "...##......##...",
    "...##......##...",
    "...##......##...",
    "....##....##....",
    ".....######.....",
    "......####......",
    "................",
  },
  {  // 7
    "................",
    "..############..",
    "..############..",
    "...........##...",
    "..........##....",
    ".........##.....",
    "........##......",
    "........##......",
    ".......##.......",
    ".......##.......",
    "......##........",
    "......##........",
    ".....##.........",
    ".....##.........",
    ".....##.........",
    "................",
  },
  {  // 8
    "................",
    ".....######.....",
    "....##....##....",
    "...##......##...",
    "...##......##...",
    "....##....##....",
    ".....######.....",
    ".....######.....",
    "....##....##....",
    "...##......##...",
    "...##......##...",
    "...##......##...",
    "....##....##....",
    ".....######.....",
    "......####......",
    "................",
  },
  {  // 9
    "................",
    "......####......",
    ".....######.....",
    "....##....##....",
    "...##......##...",
    "...##......##...",
    "...##.....###...",
    "....##########..",
    ".....#####.##...",
    "...........##...",
    "...........##...",
    "..........##....",
    ".........##.....",
    ".......###......",
    "....####........",
    "................",
  },
}};
// clang-format on

}  // namespace

std::span<const char* const> glyph_template(Label label) {
  if (!is_valid_label(label)) throw Error(ErrorCode::InvalidArgument, "no glyph for label " + std::to_string(label));
  return kGlyphs[static_cast<std::size_t>(label)];
}

}  // namespace digits
