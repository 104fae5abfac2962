#include "hfgtflow/sd_engine.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

namespace {

struct Env {
  const StockFlowModel *model;
  const SdState *state;
  std::size_t k;
  std::unordered_map<std::string, double> cache;

  double exogenous_at(const std::string &name) const {
    auto track = model->exogenous.find(name);
    if (track != model->exogenous.end()) {
      if (k >= track->second.size())
        throw Error(errc::inconsistent_horizon,
                    "exogenous track '" + name + "' shorter than horizon");
      return track->second[k];
    }
    auto c = model->constants.find(name);
    if (c != model->constants.end())
      return c->second;
    throw Error(errc::dangling_reference,
                "name '" + name + "' does not resolve in stock-flow model");
  }
};

double interp(const StockFlowModel::Lookup &lk, double x) {
  if (lk.x.empty())
    throw Error(errc::invalid_document, "empty lookup '" + lk.name + "'");
  if (x <= lk.x.front())
    return lk.y.front();
  if (x >= lk.x.back())
    return lk.y.back();
  for (std::size_t i = 1; i < lk.x.size(); ++i)
    if (x <= lk.x[i]) {
      double t = (x - lk.x[i - 1]) / (lk.x[i] - lk.x[i - 1]);
      return lk.y[i - 1] + t * (lk.y[i] - lk.y[i - 1]);
    }
  return lk.y.back();
}

// Resolves stocks first, then already-evaluated lookups/auxiliaries, then
// exogenous tracks and constants.
double resolve(Env &env, const std::string &name) {
  for (std::size_t i = 0; i < env.model->stocks.size(); ++i)
    if (env.model->stocks[i].name == name)
      return env.state->stocks[i];
  auto it = env.cache.find(name);
  if (it != env.cache.end())
    return it->second;
  return env.exogenous_at(name);
}

void eval_auxiliaries(Env &env, std::vector<double> &aux_out) {
  const StockFlowModel &m = *env.model;
  for (const auto &lk : m.lookups)
    env.cache[lk.name] = interp(lk, resolve(env, lk.input));

  // Dependency-ordered evaluation with cycle detection.
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m.auxiliaries.size(); ++i)
    index[m.auxiliaries[i].name] = i;
  aux_out.assign(m.auxiliaries.size(), 0.0);
  std::vector<int> mark(m.auxiliaries.size(), 0); // 0 new, 1 visiting, 2 done

  auto visit = [&](auto &&self, std::size_t i) -> void {
    if (mark[i] == 2)
      return;
    if (mark[i] == 1)
      throw Error(errc::cyclic_auxiliary,
                  "auxiliary '" + m.auxiliaries[i].name + "' is cyclic");
    mark[i] = 1;
    std::vector<std::string> refs;
    m.auxiliaries[i].expression->collect_refs(refs);
    for (const auto &r : refs) {
      auto dep = index.find(r);
      if (dep != index.end())
        self(self, dep->second);
    }
    double v = m.auxiliaries[i].expression->eval(
        [&](const std::string &n) { return resolve(env, n); });
    if (!std::isfinite(v))
      throw Error(errc::nonfinite_value,
                  "auxiliary '" + m.auxiliaries[i].name + "' is non-finite");
    aux_out[i] = v;
    env.cache[m.auxiliaries[i].name] = v;
    mark[i] = 2;
  };
  for (std::size_t i = 0; i < m.auxiliaries.size(); ++i)
    visit(visit, i);
}

} // namespace

SdState initial_sd_state(const StockFlowModel &model) {
  SdState s;
  s.stocks.reserve(model.stocks.size());
  for (const auto &st : model.stocks)
    s.stocks.push_back(st.initial);
  s.flows.assign(model.flows.size(), 0.0);
  s.auxiliaries.assign(model.auxiliaries.size(), 0.0);
  return s;
}

SdState sd_step(const SdState &state, const StockFlowModel &model,
                std::size_t k) {
  Env env{&model, &state, k, {}};
  SdState next = state;
  eval_auxiliaries(env, next.auxiliaries);

  next.flows.assign(model.flows.size(), 0.0);
  for (std::size_t i = 0; i < model.flows.size(); ++i) {
    double rate = model.flows[i].rate->eval(
        [&](const std::string &n) { return resolve(env, n); });
    if (!std::isfinite(rate))
      throw Error(errc::nonfinite_value,
                  "flow '" + model.flows[i].name + "' is non-finite");
    next.flows[i] = rate;
  }

  for (std::size_t s = 0; s < model.stocks.size(); ++s) {
    double net = 0.0;
    for (std::size_t i = 0; i < model.flows.size(); ++i) {
      if (model.flows[i].sink == model.stocks[s].name)
        net += next.flows[i];
      if (model.flows[i].source == model.stocks[s].name)
        net -= next.flows[i];
    }
    next.stocks[s] = state.stocks[s] + net * model.dt;
  }
  return next;
}

Trajectory run_sd(const StockFlowModel &model) {
  for (const auto &f : model.flows) {
    auto endpoint_ok = [&](const std::string &e) {
      if (e == kBoundary)
        return true;
      for (const auto &s : model.stocks)
        if (s.name == e)
          return true;
      return false;
    };
    if (!endpoint_ok(f.source) || !endpoint_ok(f.sink))
      throw Error(errc::dangling_reference,
                  "flow '" + f.name + "' endpoint does not resolve");
  }

  std::vector<std::string> columns{"k"};
  for (const auto &s : model.stocks)
    columns.push_back(s.name);
  for (const auto &f : model.flows)
    columns.push_back(f.name);
  for (const auto &a : model.auxiliaries)
    columns.push_back(a.name);
  Trajectory traj(columns);

  SdState state = initial_sd_state(model);
  for (std::size_t k = 0; k < model.horizon; ++k) {
    SdState next = sd_step(state, model, k);
    std::vector<double> row{static_cast<double>(k)};
    row.insert(row.end(), state.stocks.begin(), state.stocks.end());
    row.insert(row.end(), next.flows.begin(), next.flows.end());
    row.insert(row.end(), next.auxiliaries.begin(), next.auxiliaries.end());
    traj.append_row(std::move(row));
    state = std::move(next);
  }
  std::vector<double> last{static_cast<double>(model.horizon)};
  last.insert(last.end(), state.stocks.begin(), state.stocks.end());
  last.insert(last.end(), model.flows.size() + model.auxiliaries.size(), 0.0);
  traj.append_row(std::move(last));
  return traj;
}

} // namespace hfgtflow
