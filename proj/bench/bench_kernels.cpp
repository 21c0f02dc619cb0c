// Serial reference vs OpenMP kernels on a mid-size quadnet batch.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "robtrade/attack.hpp"
#include "robtrade/batch.hpp"
#include "robtrade/data.hpp"
#include "robtrade/models.hpp"
#include "robtrade/rng.hpp"

using namespace robtrade;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const Index n = argc > 1 ? std::stol(argv[1]) : 4000;
  const Index m = 6;
  const int reps = 5;

  SeededStream rng(1);
  const ShallowQuadNet model(m, {1.0, 0.5, -0.25}, 0.1);
  const LabeledDataset data(rng.normal_matrix(n, m), rng.normal_vector(n));
  const Vector theta = rng.normal_vector(model.param_dim());
  AttackSpec box;
  box.epsilon = 0.05;
  AttackSpec ball = box;
  ball.p = NormOrder::two();

  std::printf("threads %d, n = %ld, m = %ld, d = %ld\n", omp_get_max_threads(),
              static_cast<long>(n), static_cast<long>(m), static_cast<long>(model.param_dim()));
  std::printf("%-28s %12s %12s %8s %s\n", "kernel", "serial [s]", "omp [s]", "speedup", "identical");

  bool all_same = true;
  const auto row = [&](const char* name, auto run) {
    decltype(run(Execution::serial)) a{}, b{};
    const double ts = best_of(reps, [&] { a = run(Execution::serial); });
    const double tp = best_of(reps, [&] { b = run(Execution::parallel); });
    const bool same = a == b;
    all_same = all_same && same;
    std::printf("%-28s %12.5f %12.5f %8.2f %s\n", name, ts, tp, ts / tp, same ? "yes" : "NO");
  };

  row("batch_loss", [&](Execution e) { return batch_loss(model, theta, data, e); });
  row("batch_gradient", [&](Execution e) { return Vector(batch_gradient(model, theta, data, e)); });
  row("batch_hessian", [&](Execution e) { return Matrix(batch_hessian(model, theta, data, e)); });
  row("adversarial loss (box)",
      [&](Execution e) { return adversarial_batch_loss(model, theta, data, box, e); });
  row("adversarial loss (ball)",
      [&](Execution e) { return adversarial_batch_loss(model, theta, data, ball, e); });

  if (omp_get_max_threads() == 1) std::printf("note: one thread available; speedup is ~1 by construction\n");
  return all_same ? 0 : 1;
}
