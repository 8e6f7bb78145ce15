// Generic Picard lattice of a configuration and its transcendental part.
#include "k3lat/casebook.hpp"
#include "k3lat/json_io.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  using namespace k3lat;
  if (argc != 2) {
    std::cerr << "usage: picard CONFIG.json\n";
    return 2;
  }
  std::ifstream in(argv[1]);
  Configuration cfg = configuration_from_json(json::parse(in));
  ConfigFrame f = make_frame(cfg);
  AdmissibleResult r = admissible_picard(f, build_M(f), cfg.singularities);
  std::cout << cfg.name << ": " << r.survivors.size() << " admissible, " << r.rejected << " rejected\n";
  for (const auto& p : r.survivors) {
    FiniteQuadraticForm q = discriminant_group(p.lattice);
    auto [pos, neg] = signature(p.lattice);
    std::cout << "  rank " << p.lattice.rank() << " signature (" << pos << "," << neg << ") A = "
              << group_string(q.orders) << "\n";
    std::cout << "  stabilizer order " << stabilizer_action(f, p).group_order << "\n";
  }
}
