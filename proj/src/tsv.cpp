#include "modalq/tsv.hpp"

#include <sstream>

namespace modalq {

void write_tsv(std::ostream& out, const relalg::Relation& rel, bool header) {
  if (header) {
    for (std::size_t j = 1; j <= rel.degree(); ++j) out << (j > 1 ? "\t" : "") << j;
    out << '\n';
  }
  for (const auto& t : rel) {
    for (std::size_t j = 0; j < t.size(); ++j) out << (j ? "\t" : "") << t[j];
    out << '\n';
  }
}

std::string to_tsv(const relalg::Relation& rel, bool header) {
  std::ostringstream out;
  write_tsv(out, rel, header);
  return out.str();
}

}  // namespace modalq
