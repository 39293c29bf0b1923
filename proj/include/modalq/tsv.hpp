#pragma once

#include <ostream>
#include <string>

#include "modalq/relalg.hpp"

namespace modalq {

// One tuple per line in lexicographic order, tab-separated. With header, a
// first line lists the 1-based column indices.
std::string to_tsv(const relalg::Relation& rel, bool header = false);
void write_tsv(std::ostream& out, const relalg::Relation& rel, bool header = false);

}  // namespace modalq
