#include "sample_ops.hpp"

namespace robtrade::kernels::omp {

namespace {
template <class Body>
void for_each_sample(Index n, Body&& body) {
  detail::omp_for(n, std::forward<Body>(body));
}
}  // namespace

Vector losses(const SampleInputs& in) {
  Vector out(in.data.size());
  for_each_sample(in.data.size(), [&](Index i) { out(i) = detail::sample_loss(in, i); });
  return out;
}

Matrix gradients(const SampleInputs& in) {
  Matrix out(in.data.size(), in.model.param_dim());
  for_each_sample(in.data.size(),
                  [&](Index i) { out.row(i) = detail::sample_gradient(in, i).transpose(); });
  return out;
}

std::vector<Matrix> hessians(const SampleInputs& in) {
  std::vector<Matrix> out(static_cast<std::size_t>(in.data.size()));
  for_each_sample(in.data.size(), [&](Index i) {
    out[static_cast<std::size_t>(i)] = detail::sample_hessian(in, i);
  });
  return out;
}

std::vector<Perturbation> attacks(const LossModel& model, const Vector& theta,
                                  const LabeledDataset& data, const AttackSpec& spec) {
  std::vector<Perturbation> out(static_cast<std::size_t>(data.size()));
  for_each_sample(data.size(), [&](Index i) {
    out[static_cast<std::size_t>(i)] = detail::sample_attack(model, theta, data, spec, i);
  });
  return out;
}

std::vector<PhiTerm> phi_terms(const LossModel& model, const Vector& theta,
                               const LabeledDataset& data, NormOrder p, double degenerate_tol) {
  std::vector<PhiTerm> out(static_cast<std::size_t>(data.size()));
  for_each_sample(data.size(), [&](Index i) {
    out[static_cast<std::size_t>(i)] =
        detail::sample_phi_term(model, theta, data, p, degenerate_tol, i);
  });
  return out;
}

std::vector<SamplePieces> pieces(const LossModel& model, const Vector& theta,
                                 const LabeledDataset& data, const AttackSpec& spec,
                                 const Vector& best_values, double tolerance) {
  std::vector<SamplePieces> out(static_cast<std::size_t>(data.size()));
  for_each_sample(data.size(), [&](Index i) {
    out[static_cast<std::size_t>(i)] =
        detail::sample_pieces(model, theta, data, spec, best_values(i), tolerance, i);
  });
  return out;
}

}  // namespace robtrade::kernels::omp
