// Metastable helium near a gold wall: C3 at a few separations from tabulated
// Au optical data (Drude below the data) and the single-oscillator atom.
//
//   au_helium_demo [path/to/au_ordal_hagemann.csv]

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "vdw/lifshitz.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "data/au_ordal_hagemann.csv";
  try {
    using namespace vdw;
    const auto gold = DielectricModel::tabulated(load_optical_table(path),
                                                 DrudeExtension{1.37e16, phys::ev_to_angular(0.035)});
    const auto helium = PolarizabilityModel::oscillator(315.63, phys::ev_to_angular(1.18));
    const std::vector<double> separations{3e-9, 10e-9, 50e-9, 150e-9};
    const auto points = sweep(separations, MatsubaraSpec{300.0}, gold, helium);

    std::printf("%8s %10s %14s %8s\n", "a (nm)", "C3 (a.u.)", "F (J)", "terms");
    for (const auto& p : points) {
      std::printf("%8.0f %10.4f %14.5e %8d\n", p.a * 1e9, p.C3.value_au, p.F, p.diagnostics.l_used);
    }
    const auto ideal = compute_c3_integral(DielectricModel::ideal_metal(), helium);
    std::printf("nonretarded ideal-metal limit: %.4f a.u.\n", ideal.value_au);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
