#include "dfarl/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "dfarl/errors.hpp"

namespace dfarl {

namespace {

double gaussian(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void fill_gaussian(std::span<double> out, double stddev, Rng& rng) {
  for (double& x : out) x = stddev * gaussian(rng);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

const char* to_string(EncoderMode m) {
  return m == EncoderMode::Tabular ? "tabular" : "message_passing";
}

EncoderMode encoder_mode_from_string(const std::string& s) {
  if (s == "tabular") return EncoderMode::Tabular;
  if (s == "message_passing" || s == "mp") return EncoderMode::MessagePassing;
  throw ValidationError("unknown encoder mode: " + s);
}

EmbeddingModel EmbeddingModel::tabular(const InducedMdp& space, int dim, double init_scale, Rng& rng) {
  require(dim >= 1, "tabular encoder: dim must be >= 1");
  EmbeddingModel m;
  m.mode_ = EncoderMode::Tabular;
  m.dim_ = dim;
  m.alphabet_size_ = space.alphabet_size();
  for (const auto& c : space.states()) m.row_hashes_.push_back(c.hash);
  m.params_.assign(static_cast<std::size_t>(space.num_states()) * dim + 1, 0.0);
  fill_gaussian(std::span(m.params_).first(m.params_.size() - 1), 1.0, rng);
  m.params_.back() = init_scale;
  return m;
}

EmbeddingModel EmbeddingModel::message_passing(int alphabet_size, int dim, double init_scale, Rng& rng) {
  require(dim >= 1, "message-passing encoder: dim must be >= 1");
  require(alphabet_size >= 1, "message-passing encoder: alphabet_size must be >= 1");
  EmbeddingModel m;
  m.mode_ = EncoderMode::MessagePassing;
  m.dim_ = dim;
  m.alphabet_size_ = alphabet_size;
  const std::size_t d = dim;
  Layout& l = m.layout_;
  l.w_in = 0;
  l.b_in = l.w_in + d * 3;
  l.u = l.b_in + d;
  l.w_sym = l.u + d * d;
  l.b = l.w_sym + static_cast<std::size_t>(alphabet_size) * d * d;
  m.params_.assign(l.b + d + 1, 0.0);
  auto p = std::span(m.params_);
  fill_gaussian(p.subspan(l.w_in, d * 3), 1.0, rng);
  fill_gaussian(p.subspan(l.b_in, d), 0.5, rng);
  const double fan = 1.0 / std::sqrt(static_cast<double>(d * (alphabet_size + 1)));
  fill_gaussian(p.subspan(l.u, d * d), 1.5 * fan, rng);
  fill_gaussian(p.subspan(l.w_sym, static_cast<std::size_t>(alphabet_size) * d * d), 1.5 * fan, rng);
  fill_gaussian(p.subspan(l.b, d), 0.5, rng);
  m.params_.back() = init_scale;
  return m;
}

int EmbeddingModel::row_of(const Dfa& dfa) const {
  const std::uint64_t h = canonicalize(minimize(dfa)).hash;
  auto it = std::find(row_hashes_.begin(), row_hashes_.end(), h);
  return it == row_hashes_.end() ? -1 : static_cast<int>(it - row_hashes_.begin());
}

Vec EmbeddingModel::mp_forward(const Dfa& dfa, Tape* tape) const {
  require(dfa.alphabet_size() == alphabet_size_, "encoder: alphabet mismatch");
  const int n = dfa.num_states();
  const int d = dim_;
  const double* p = params_.data();
  const Layout& l = layout_;

  Vec h(static_cast<std::size_t>(n) * d);
  for (State q = 0; q < n; ++q) {
    const double x[3] = {q == dfa.initial() ? 1.0 : 0.0, dfa.is_accepting(q) ? 1.0 : 0.0,
                         dfa.is_rejecting(q) ? 1.0 : 0.0};
    for (int i = 0; i < d; ++i) {
      double z = p[l.b_in + i];
      for (int j = 0; j < 3; ++j) z += p[l.w_in + i * 3 + j] * x[j];
      h[q * d + i] = std::tanh(z);
    }
  }
  if (tape) {
    tape->rounds.clear();
    tape->rounds.push_back(h);
  }
  Vec nh(h.size());
  for (int r = 0; r < n; ++r) {
    for (State q = 0; q < n; ++q) {
      for (int i = 0; i < d; ++i) {
        double z = p[l.b + i];
        const double* urow = p + l.u + static_cast<std::size_t>(i) * d;
        for (int j = 0; j < d; ++j) z += urow[j] * h[q * d + j];
        for (Symbol a = 0; a < alphabet_size_; ++a) {
          const double* wrow = p + l.w_sym + (static_cast<std::size_t>(a) * d + i) * d;
          const double* src = &h[static_cast<std::size_t>(dfa.next(q, a)) * d];
          for (int j = 0; j < d; ++j) z += wrow[j] * src[j];
        }
        nh[q * d + i] = std::tanh(z);
      }
    }
    std::swap(h, nh);
    if (tape) tape->rounds.push_back(h);
  }
  return Vec(h.begin() + static_cast<std::ptrdiff_t>(dfa.initial()) * d,
             h.begin() + static_cast<std::ptrdiff_t>(dfa.initial() + 1) * d);
}

void EmbeddingModel::mp_backward(const Dfa& dfa, const Tape& tape, std::span<const double> dphi,
                                 std::span<double> grad) const {
  const int n = dfa.num_states();
  const int d = dim_;
  const double* p = params_.data();
  const Layout& l = layout_;

  Vec g(static_cast<std::size_t>(n) * d, 0.0);
  std::copy(dphi.begin(), dphi.end(), g.begin() + static_cast<std::ptrdiff_t>(dfa.initial()) * d);
  Vec gprev(g.size());
  Vec dpre(d);
  for (int r = n; r >= 1; --r) {
    const Vec& hr = tape.rounds[r];
    const Vec& hp = tape.rounds[r - 1];
    std::fill(gprev.begin(), gprev.end(), 0.0);
    for (State q = 0; q < n; ++q) {
      bool any = false;
      for (int i = 0; i < d; ++i) {
        const double y = hr[q * d + i];
        dpre[i] = g[q * d + i] * (1.0 - y * y);
        any = any || dpre[i] != 0.0;
      }
      if (!any) continue;
      for (int i = 0; i < d; ++i) {
        const double gi = dpre[i];
        grad[l.b + i] += gi;
        double* gu = &grad[l.u + static_cast<std::size_t>(i) * d];
        const double* urow = p + l.u + static_cast<std::size_t>(i) * d;
        for (int j = 0; j < d; ++j) {
          gu[j] += gi * hp[q * d + j];
          gprev[q * d + j] += urow[j] * gi;
        }
        for (Symbol a = 0; a < alphabet_size_; ++a) {
          const std::size_t t = static_cast<std::size_t>(dfa.next(q, a)) * d;
          const std::size_t off = l.w_sym + (static_cast<std::size_t>(a) * d + i) * d;
          for (int j = 0; j < d; ++j) {
            grad[off + j] += gi * hp[t + j];
            gprev[t + j] += p[off + j] * gi;
          }
        }
      }
    }
    std::swap(g, gprev);
  }
  const Vec& h0 = tape.rounds[0];
  for (State q = 0; q < n; ++q) {
    const double x[3] = {q == dfa.initial() ? 1.0 : 0.0, dfa.is_accepting(q) ? 1.0 : 0.0,
                         dfa.is_rejecting(q) ? 1.0 : 0.0};
    for (int i = 0; i < d; ++i) {
      const double y = h0[q * d + i];
      const double gi = g[q * d + i] * (1.0 - y * y);
      grad[l.b_in + i] += gi;
      for (int j = 0; j < 3; ++j) grad[l.w_in + i * 3 + j] += gi * x[j];
    }
  }
}

Vec EmbeddingModel::embed(const DfaInput& in) const {
  if (mode_ == EncoderMode::Tabular) {
    int row = in.id;
    if ((row < 0 || row >= num_rows()) && in.dfa) row = row_of(*in.dfa);
    if (row < 0 || row >= num_rows()) throw ValidationError("tabular encoder: unknown state");
    auto first = params_.begin() + static_cast<std::ptrdiff_t>(row) * dim_;
    return Vec(first, first + dim_);
  }
  require(in.dfa != nullptr, "message-passing encoder: DFA required");
  return mp_forward(minimize(*in.dfa), nullptr);
}

void EmbeddingModel::backprop(const DfaInput& in, std::span<const double> dphi,
                              std::span<double> grad) const {
  if (mode_ == EncoderMode::Tabular) {
    int row = in.id;
    if ((row < 0 || row >= num_rows()) && in.dfa) row = row_of(*in.dfa);
    if (row < 0 || row >= num_rows()) throw ValidationError("tabular encoder: unknown state");
    for (int i = 0; i < dim_; ++i) grad[static_cast<std::size_t>(row) * dim_ + i] += dphi[i];
    return;
  }
  require(in.dfa != nullptr, "message-passing encoder: DFA required");
  const Dfa canonical = minimize(*in.dfa);
  Tape tape;
  mp_forward(canonical, &tape);
  mp_backward(canonical, tape, dphi, grad);
}

nlohmann::json EmbeddingModel::to_json() const {
  nlohmann::json j;
  j["mode"] = dfarl::to_string(mode_);
  j["dim"] = dim_;
  j["alphabet_size"] = alphabet_size_;
  std::vector<std::string> hashes;
  for (auto h : row_hashes_) hashes.push_back(hash_hex(h));
  j["row_hashes"] = hashes;
  j["params"] = params_;
  return j;
}

EmbeddingModel EmbeddingModel::from_json(const nlohmann::json& j) {
  try {
    const EncoderMode mode = encoder_mode_from_string(j.at("mode").get<std::string>());
    const int dim = j.at("dim").get<int>();
    const int sigma = j.at("alphabet_size").get<int>();
    Rng dummy(0);
    EmbeddingModel m;
    if (mode == EncoderMode::MessagePassing) {
      m = message_passing(sigma, dim, 1.0, dummy);
    } else {
      m.mode_ = mode;
      m.dim_ = dim;
      m.alphabet_size_ = sigma;
      for (const auto& h : j.at("row_hashes")) m.row_hashes_.push_back(std::stoull(h.get<std::string>(), nullptr, 16));
    }
    auto params = j.at("params").get<std::vector<double>>();
    const std::size_t expected =
        mode == EncoderMode::Tabular ? m.row_hashes_.size() * dim + 1 : m.params_.size();
    require(params.size() == expected, "encoder json: parameter count mismatch");
    m.params_ = std::move(params);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("encoder json: ") + e.what());
  }
}

Vec normalized(const Vec& v) {
  const double n = norm2(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvariantError("encoder: zero-norm embedding");
  Vec u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / n;
  return u;
}

double scaled_distance(double scale, std::span<const double> ua, std::span<const double> ub) {
  double s = 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    const double diff = ua[i] - ub[i];
    s += diff * diff;
  }
  return scale * std::sqrt(s);
}

double embed_distance(const EmbeddingModel& model, const DfaInput& a, const DfaInput& b) {
  const Vec ua = normalized(model.embed(a));
  const Vec ub = normalized(model.embed(b));
  return scaled_distance(model.scale(), ua, ub);
}

double embed_distance(const EmbeddingModel& model, const Dfa& a, const Dfa& b) {
  return embed_distance(model, DfaInput{-1, &a}, DfaInput{-1, &b});
}

Vec embed_space(const EmbeddingModel& model, const InducedMdp& space) {
  const int n = space.num_states();
  const int d = model.dim();
  Vec out(static_cast<std::size_t>(n) * d);
  // Tabular rows follow the training space; other spaces are matched by hash.
  std::vector<int> rows(n);
  for (int s = 0; s < n; ++s) {
    rows[s] = s;
    if (model.mode() == EncoderMode::Tabular &&
        (s >= model.num_rows() || model.row_hashes()[s] != space.state(s).hash)) {
      auto it = std::find(model.row_hashes().begin(), model.row_hashes().end(), space.state(s).hash);
      if (it == model.row_hashes().end()) throw ValidationError("tabular encoder: unknown state");
      rows[s] = static_cast<int>(it - model.row_hashes().begin());
    }
  }
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 4)
  for (int s = 0; s < n; ++s) {
    const Vec v = model.embed(DfaInput{rows[s], &space.state(s).dfa});
    const double len = norm2(v);
    if (!(len > 0.0) || !std::isfinite(len)) {
#pragma omp atomic write
      failed = true;
      continue;
    }
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(s) * d + i] = v[i] / len;
  }
  if (failed) throw InvariantError("encoder: zero-norm embedding");
  return out;
}

double separation_rate(const EmbeddingModel& model, const InducedMdp& space, double threshold) {
  const Vec u = embed_space(model, space);
  const int n = space.num_states();
  const std::size_t d = model.dim();
  if (n < 2) return 1.0;
  std::size_t separated = 0, total = 0;
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      ++total;
      if (scaled_distance(model.scale(), std::span(u).subspan(s * d, d), std::span(u).subspan(t * d, d)) > threshold)
        ++separated;
    }
  return static_cast<double>(separated) / static_cast<double>(total);
}

std::vector<std::vector<double>> evaluate_heatmap(const EmbeddingModel& model, const std::vector<Dfa>& dfas) {
  const int n = static_cast<int>(dfas.size());
  std::vector<Vec> u(n);
  for (int i = 0; i < n; ++i) u[i] = normalized(model.embed(DfaInput{-1, &dfas[i]}));
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out[i][j] = scaled_distance(model.scale(), u[i], u[j]);
  return out;
}

void write_curve_csv(std::ostream& os, const std::vector<EpochStats>& curve) {
  os << "epoch,value_loss,policy_objective,separation_rate\n";
  char buf[128];
  for (const auto& e : curve) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", e.epoch, e.value_loss,
                  e.policy_objective, e.separation_rate);
    os << buf;
  }
}

}  // namespace dfarl
