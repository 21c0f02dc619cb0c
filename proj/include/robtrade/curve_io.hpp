#pragma once

#include <string>

#include <json.hpp>

#include "robtrade/tradeoff.hpp"

namespace robtrade {

/// Curve document, keys in this order:
///   model, model_params, dataset, attack {p, epsilon, pgd_steps, pgd_step_size},
///   seed, points [{xi, alpha, beta, train_alpha, train_beta, accuracy_clean?,
///   accuracy_adv?, converged, grad_norm_final, iterations, theta}], frontier.
nlohmann::ordered_json curve_to_json(const TradeoffCurve& curve);

/// Header row then one row per point.
std::string curve_to_csv(const TradeoffCurve& curve);

/// Two whitespace-separated columns (alpha beta), one frontier point per line.
std::string frontier_plot_data(const TradeoffCurve& curve);

std::string gnuplot_script(const std::string& data_file, const std::string& title);

/// p as JSON: the string "inf" or a number.
nlohmann::ordered_json norm_to_json(NormOrder p);

}  // namespace robtrade
