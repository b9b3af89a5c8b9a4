// Builds K_{3*2} with lists of size 3, checks the sufficient conditions on its
// color-degree profile, solves it and double-checks the result.
#include <iostream>

#include "hlc/conditions.hpp"
#include "hlc/generators.hpp"
#include "hlc/oracle.hpp"
#include "hlc/solver.hpp"

int main() {
  const auto h = hlc::gen_complete(3, 2);
  const auto lists = hlc::gen_lists(h, {hlc::ListModelKind::UniformQ, {3}, 0}, 1);

  const auto profile = hlc::color_degree_profile(h, lists);
  hlc::ParamVector pv{3, 2, {3, 3, 3}, {}, {}, 0.0};
  for (std::size_t i = 0; i < 3; ++i) pv.D.push_back(static_cast<double>(profile.D[i]));
  const auto c2 = hlc::eval_c2(pv);
  std::cout << "C2 margin " << c2.margin << (c2.satisfied ? " (satisfied)" : " (not satisfied)") << "\n";

  const auto v = hlc::VertexId{2, 0};
  const auto check = hlc::verify_lemma_41(h, lists, 2, v);
  std::cout << "P[no color left at 2:0] = " << check.exact << " <= " << check.bound << "\n";

  hlc::SolverConfig cfg;
  cfg.seed = 7;
  const auto r = hlc::moser_tardos_solve(h, lists, cfg);
  std::cout << "solve: " << hlc::to_string(r.status) << " after " << r.resample_count << " resamples\n";
  if (r.success()) {
    std::cout << "proper: " << std::boolalpha << hlc::is_proper_L_coloring(h, lists, r.coloring) << "\n";
  }
}
