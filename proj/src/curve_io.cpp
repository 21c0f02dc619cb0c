#include "robtrade/curve_io.hpp"

#include <sstream>

#include "robtrade/io.hpp"

namespace robtrade {

nlohmann::ordered_json norm_to_json(NormOrder p) {
  if (p.is_infinity()) return "inf";
  return p.value();
}

nlohmann::ordered_json curve_to_json(const TradeoffCurve& curve) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["model"] = curve.model;
  json params = json::object();
  for (const auto& [k, v] : curve.model_params) params[k] = v;
  doc["model_params"] = params;
  doc["dataset"] = curve.dataset;
  doc["attack"] = {{"p", norm_to_json(curve.attack.p)},
                   {"epsilon", curve.attack.epsilon},
                   {"pgd_steps", curve.attack.pgd_steps},
                   {"pgd_step_size", curve.attack.step_size()}};
  doc["seed"] = curve.seed;
  json points = json::array();
  for (const auto& pt : curve.points) {
    json jp;
    jp["xi"] = pt.xi;
    jp["alpha"] = pt.alpha;
    jp["beta"] = pt.beta;
    jp["train_alpha"] = pt.train_alpha;
    jp["train_beta"] = pt.train_beta;
    if (pt.accuracy_clean) jp["accuracy_clean"] = *pt.accuracy_clean;
    if (pt.accuracy_adv) jp["accuracy_adv"] = *pt.accuracy_adv;
    jp["converged"] = pt.converged;
    jp["grad_norm_final"] = pt.grad_norm_final;
    jp["iterations"] = pt.iterations;
    jp["theta"] = to_json(pt.theta.values());
    points.push_back(std::move(jp));
  }
  doc["points"] = std::move(points);
  doc["frontier"] = curve.frontier;
  return doc;
}

std::string curve_to_csv(const TradeoffCurve& curve) {
  std::ostringstream out;
  out << "xi,alpha,beta,train_alpha,train_beta,accuracy_clean,accuracy_adv,converged,"
         "grad_norm_final,iterations,on_frontier\n";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& pt = curve.points[i];
    bool on_frontier = false;
    for (auto f : curve.frontier) on_frontier = on_frontier || f == i;
    out << format_double(pt.xi) << ',' << format_double(pt.alpha) << ','
        << format_double(pt.beta) << ',' << format_double(pt.train_alpha) << ','
        << format_double(pt.train_beta) << ','
        << (pt.accuracy_clean ? format_double(*pt.accuracy_clean) : "") << ','
        << (pt.accuracy_adv ? format_double(*pt.accuracy_adv) : "") << ','
        << (pt.converged ? 1 : 0) << ',' << format_double(pt.grad_norm_final) << ','
        << pt.iterations << ',' << (on_frontier ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string frontier_plot_data(const TradeoffCurve& curve) {
  std::ostringstream out;
  out << "# alpha beta\n";
  for (auto i : curve.frontier) {
    out << format_double(curve.points[i].alpha) << ' ' << format_double(curve.points[i].beta)
        << '\n';
  }
  return out.str();
}

std::string gnuplot_script(const std::string& data_file, const std::string& title) {
  std::ostringstream out;
  out << "set title \"" << title << "\"\n"
      << "set xlabel \"native loss (alpha)\"\n"
      << "set ylabel \"adversarial loss (beta)\"\n"
      << "set grid\n"
      << "plot \"" << data_file << "\" using 1:2 with linespoints title \"frontier\"\n";
  return out.str();
}

}  // namespace robtrade
