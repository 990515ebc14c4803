#include "pitd/deformation.hpp"
#include "pitd/format.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pitd {

void write_shape(std::ostream& out, std::span<const double> shape) {
  for (double v : shape) out << format_real(v) << '\n';
}

std::vector<double> read_shape(std::istream& in) {
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::size_t used = 0;
    values.push_back(std::stod(line, &used));
    if (used != line.size()) throw std::invalid_argument("malformed shape line: " + line);
  }
  return values;
}

}  // namespace pitd
