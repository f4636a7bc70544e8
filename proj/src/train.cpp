// Copyright 2026 The cavpref Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cavpref/train.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cavpref/error.hpp"
#include "cavpref/rng.hpp"

namespace cavpref::policy {

TrainState::TrainState(ModelPair p, std::uint64_t seed)
    : pair(std::move(p)), rng_seed(seed) {
  opt.m = Matrix(pair.model().weights().rows, pair.model().weights().cols);
  opt.v = Matrix(pair.model().weights().rows, pair.model().weights().cols);
}

Matrix cavpref_gradient(const TrainState& state,
                        const std::vector<PreferenceRecord>& batch,
                        const BetaCalibrator& cal, const RobustConfig& cfg) {
  cfg.validate();
  if (batch.empty()) throw ValidationError("cavpref_gradient: empty batch");
  const std::size_t feature_dim = batch[0].visual_win.size();
  for (const auto& rec : batch) rec.validate(feature_dim);

  const PolicyModel& model = state.pair.model();
  const BatchBetas betas = compute_batch_betas(batch, cal);

  // Forward pass: per-sample gaps and log-sigmoid losses per channel.
  struct SampleTerms {
    double delta_y = 0.0;
    double delta_v = 0.0;
    double delta_a = 0.0;
  };
  std::vector<SampleTerms> terms(batch.size());
  std::vector<double> loss_y(batch.size());
  std::vector<double> loss_v, loss_a;

  std::size_t vi = 0, ai = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PreferenceRecord& rec = batch[i];
    const double lr_win =
        state.pair.logratio(rec.win_response, rec.visual_win, rec.audio_win, rec.question);
    const double lr_lose =
        state.pair.logratio(rec.lose_response, rec.visual_win, rec.audio_win, rec.question);
    terms[i].delta_y = lr_win - lr_lose;
    loss_y[i] = log_sigmoid(betas.y[i] * terms[i].delta_y);

    if (switch_eta(rec.task_kind) == 1) {
      const double lr_vl =
          state.pair.logratio(rec.win_response, *rec.visual_lose, rec.audio_win, rec.question);
      terms[i].delta_v = lr_win - lr_vl;
      loss_v.push_back(log_sigmoid(betas.v[vi++] * terms[i].delta_v));
    }
    if (switch_gamma(rec.task_kind) == 1) {
      const double lr_al =
          state.pair.logratio(rec.win_response, rec.visual_win, *rec.audio_lose, rec.question);
      terms[i].delta_a = lr_win - lr_al;
      loss_a.push_back(log_sigmoid(betas.a[ai++] * terms[i].delta_a));
    }
  }

  // d(component)/d(per-sample log-sigmoid loss). The tilted aggregates both
  // reduce to -softmax weights over the sub-batch; only the softmax argument
  // differs between the two conventions.
  auto component_weights = [&](const std::vector<double>& losses, double lambda) {
    std::vector<double> w;
    if (losses.empty()) return w;
    if (cfg.tilt == Tilt::kPseudocode) {
      w = robust_aggregate_grad(losses, lambda, Tilt::kPseudocode).dvalue_dloss;
    } else {
      std::vector<double> positive(losses.size());
      for (std::size_t i = 0; i < losses.size(); ++i) positive[i] = -losses[i];
      w = robust_aggregate_grad(positive, lambda, Tilt::kTheorem).dvalue_dloss;
      for (auto& x : w) x = -x;  // chain through l = -L
    }
    return w;
  };
  const auto wy = component_weights(loss_y, cfg.lambda_y);
  const auto wv = component_weights(loss_v, cfg.lambda_v);
  const auto wa = component_weights(loss_a, cfg.lambda_a);

  // Backward pass. For each channel the per-sample coefficient is
  // dTotal/dL * beta * sigma(-beta * delta), applied to the difference of
  // the two conditional log-prob gradients of the policy.
  Matrix grad(model.weights().rows, model.weights().cols);
  vi = 0;
  ai = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PreferenceRecord& rec = batch[i];
    const Conditioning cond_win{rec.visual_win, rec.audio_win, rec.question};

    double coeff_win = 0.0;  // total coefficient on grad log pi(y_w | winning cond)

    const double cy = wy[i] * betas.y[i] * sigmoid(-betas.y[i] * terms[i].delta_y);
    coeff_win += cy;
    model.accumulate_logprob_grad(rec.lose_response, cond_win, -cy, grad);

    if (switch_eta(rec.task_kind) == 1) {
      const double bv = betas.v[vi];
      const double cv = wv[vi] * bv * sigmoid(-bv * terms[i].delta_v);
      ++vi;
      coeff_win += cv;
      const Conditioning cond_vl{*rec.visual_lose, rec.audio_win, rec.question};
      model.accumulate_logprob_grad(rec.win_response, cond_vl, -cv, grad);
    }
    if (switch_gamma(rec.task_kind) == 1) {
      const double ba = betas.a[ai];
      const double ca = wa[ai] * ba * sigmoid(-ba * terms[i].delta_a);
      ++ai;
      coeff_win += ca;
      const Conditioning cond_al{rec.visual_win, *rec.audio_lose, rec.question};
      model.accumulate_logprob_grad(rec.win_response, cond_al, -ca, grad);
    }

    model.accumulate_logprob_grad(rec.win_response, cond_win, coeff_win, grad);
  }
  return grad;
}

namespace {

void adam_step(Matrix& weights, const Matrix& grad, AdamState& st, const AdamParams& p) {
  ++st.t;
  const double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(st.t));
  for (std::size_t i = 0; i < weights.data.size(); ++i) {
    const double g = grad.data[i];
    st.m.data[i] = p.beta1 * st.m.data[i] + (1.0 - p.beta1) * g;
    st.v.data[i] = p.beta2 * st.v.data[i] + (1.0 - p.beta2) * g * g;
    const double mhat = st.m.data[i] / bc1;
    const double vhat = st.v.data[i] / bc2;
    weights.data[i] -= p.lr * mhat / (std::sqrt(vhat) + p.epsilon);
  }
}

}  // namespace

TrainResult train(TrainState& state, const std::vector<PreferenceRecord>& dataset,
                  const TrainOptions& opts, const BetaCalibrator& cal,
                  const RobustConfig& cfg) {
  if (dataset.empty()) throw ValidationError("train: empty dataset");
  if (!(opts.lr >= 0.0)) throw ValidationError("train: lr must be non-negative");
  if (opts.batch_size < 1) throw ValidationError("train: batch_size must be positive");

  AdamParams adam;
  adam.lr = opts.lr;
  Rng rng(state.rng_seed);
  TrainResult result;

  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(opts.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(opts.batch_size));
      std::vector<PreferenceRecord> batch;
      batch.reserve(stop - start);
      for (std::size_t k = start; k < stop; ++k) batch.push_back(dataset[order[k]]);

      const ObjectiveResult obj = cavpref_objective(state.pair, batch, cal, cfg);
      if (!std::isfinite(obj.total) || std::abs(obj.total) > opts.divergence_guard) {
        throw TrainingDiverged("loss " + std::to_string(obj.total) + " exceeded guard " +
                               std::to_string(opts.divergence_guard) + " at step " +
                               std::to_string(state.step));
      }
      const Matrix grad = cavpref_gradient(state, batch, cal, cfg);
      adam_step(state.pair.model().weights(), grad, state.opt, adam);
      ++state.step;

      MetricsRow row;
      row.step = state.step;
      row.loss_total = obj.total;
      row.loss_y = obj.components.y;
      row.loss_v = obj.components.v;
      row.loss_a = obj.components.a;
      row.margins_y = obj.margin_y;
      std::map<std::string, std::pair<double, int>> cat;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        auto& slot = cat[batch[i].category];
        slot.first += -obj.sample_loss_y[i];
        slot.second += 1;
      }
      for (const auto& [name, acc] : cat) row.category_loss[name] = acc.first / acc.second;
      result.trace.push_back(std::move(row));
    }
  }
  return result;
}

void write_metrics_trace(const std::string& path, const std::vector<MetricsRow>& trace) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write metrics trace '" + path + "'");
  for (const auto& row : trace) {
    nlohmann::json j;
    j["step"] = row.step;
    j["loss_total"] = row.loss_total;
    j["loss_y"] = row.loss_y;
    j["loss_V"] = row.loss_v;
    j["loss_A"] = row.loss_a;
    j["category_loss"] = row.category_loss;
    j["margins_y"] = row.margins_y;
    out << j.dump() << "\n";
  }
}

FdReport finite_diff_check(TrainState& state, const std::vector<PreferenceRecord>& batch,
                           const BetaCalibrator& cal, const RobustConfig& cfg, double h,
                           double tolerance, const Matrix* gradient_override) {
  if (h < 1e-7 || h > 1e-3) {
    throw ValidationError("finite_diff_check: h must lie in [1e-7, 1e-3]");
  }

  FdReport report;
  Matrix& w = state.pair.model().weights();
  const std::size_t total = w.size();
  if (total == 0) {
    report.pass = true;
    report.vacuous = true;
    report.note = "no parameters to check";
    return report;
  }

  const Matrix analytic =
      gradient_override ? *gradient_override : cavpref_gradient(state, batch, cal, cfg);

  std::vector<std::size_t> coords;
  if (total <= 200) {
    coords.resize(total);
    for (std::size_t i = 0; i < total; ++i) coords[i] = i;
  } else {
    Rng rng(state.rng_seed ^ 0x9e3779b97f4a7c15ull);
    coords.resize(total);
    for (std::size_t i = 0; i < total; ++i) coords[i] = i;
    rng.shuffle(coords);
    coords.resize(200);
  }

  auto objective_total = [&]() {
    return cavpref_objective(state.pair, batch, cal, cfg).total;
  };

  for (std::size_t idx : coords) {
    const double saved = w.data[idx];
    w.data[idx] = saved + h;
    const double fp = objective_total();
    w.data[idx] = saved - h;
    const double fm = objective_total();
    w.data[idx] = saved;

    const double fd = (fp - fm) / (2.0 * h);
    const double an = analytic.data[idx];
    const double denom = std::max({std::abs(an), std::abs(fd), 1e-3});
    const double rel = std::abs(an - fd) / denom;
    if (rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst_row = idx / w.cols;
      report.worst_col = idx % w.cols;
    }
  }
  report.coords_checked = coords.size();
  report.pass = report.max_rel_err <= tolerance;
  if (!report.pass) {
    report.note = "worst coordinate (" + std::to_string(report.worst_row) + ", " +
                  std::to_string(report.worst_col) + ") rel err " +
                  std::to_string(report.max_rel_err);
  }
  return report;
}

}  // namespace cavpref::policy
