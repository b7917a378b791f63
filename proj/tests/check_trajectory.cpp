// check_trajectory FILE sup|decay TOL X0 X1
//   sup:   every |w_i| <= TOL
//   decay: max|w_i| at the last row <= TOL and smaller than at x = 2
// Also checks that x is strictly increasing and spans [X0, X1].
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  if (argc != 6) {
    std::fprintf(stderr, "usage: check_trajectory FILE sup|decay TOL X0 X1\n");
    return 2;
  }
  std::ifstream f(argv[1]);
  const std::string mode = argv[2];
  const double tol = std::atof(argv[3]), x0 = std::atof(argv[4]), x1 = std::atof(argv[5]);
  std::string line;
  std::getline(f, line);
  int L = 0;
  for (std::size_t p = 0; (p = line.find(",w", p)) != std::string::npos; ++p)
    if (line[p + 2] != 't') ++L;
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') {
      std::fprintf(stderr, "unexpected comment: %s\n", line.c_str());
      return 1;
    }
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  if (L == 0 || rows.size() < 2) return 1;
  if (std::abs(rows.front()[0] - x0) > 1e-12 * x0 || std::abs(rows.back()[0] - x1) > 1e-12 * x1) {
    std::fprintf(stderr, "range [%g, %g]\n", rows.front()[0], rows.back()[0]);
    return 1;
  }
  double at2 = NAN;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k && !(rows[k][0] > rows[k - 1][0])) return 1;
    double m = 0.0;
    for (int i = 1; i <= L; ++i) m = std::max(m, std::abs(rows[k][i]));
    if (mode == "sup" && !(m <= tol)) {
      std::fprintf(stderr, "|w| = %g at x = %g\n", m, rows[k][0]);
      return 1;
    }
    if (std::isnan(at2) && rows[k][0] >= 2.0) at2 = m;
  }
  if (mode == "decay") {
    double last = 0.0;
    for (int i = 1; i <= L; ++i) last = std::max(last, std::abs(rows.back()[i]));
    if (!(last <= tol && last < at2)) {
      std::fprintf(stderr, "tail %g (x=2: %g)\n", last, at2);
      return 1;
    }
  }
  return 0;
}
