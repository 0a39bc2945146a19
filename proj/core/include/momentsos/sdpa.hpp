#pragma once

#include <string>

#include "momentsos/relax.hpp"

namespace momentsos {

// SDPA sparse format (.dat-s): header m / nBLOCK / bLOCKsTRUCT / c, then
// entries "matno blkno i j value" with i <= j. Moment variables are
// enumerated in graded-lex order (auxiliary variables after them, in id
// order); equalities are encoded as paired one-dimensional inequality rows
// collected in one diagonal block of negative declared size.
std::string export_sdpa(const BlockSDP& sdp);

// Parses SDPA sparse text back into a BlockSDP over anonymous variables
// (diagonal blocks become 1x1 PSD blocks). Accepts the subset of the format
// produced by export_sdpa plus comment lines starting with '*' or '"'.
BlockSDP parse_sdpa(const std::string& text);

}  // namespace momentsos
