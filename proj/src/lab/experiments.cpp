#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

#include "detail.hpp"
#include "plab/analytic.hpp"
#include "plab/errors.hpp"
#include "plab/progressions.hpp"
#include "plab/sieve.hpp"
#include "plab/statlab.hpp"

namespace plab::lab {

using namespace detail;

namespace {

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(12);
  o << v;
  return o.str();
}

class RowSink {
 public:
  explicit RowSink(std::string id) : id_(std::move(id)), t0_(std::chrono::steady_clock::now()) {}

  // Starts timing a group of rows.
  void start() { t0_ = std::chrono::steady_clock::now(); }

  void add(double x, const std::string& params, const std::string& metric, double value,
           std::optional<double> bound = std::nullopt) {
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    if (!std::isfinite(value)) throw DomainError("metric '" + metric + "' is not finite");
    rows_.push_back({id_, x, params, metric, value, bound, dt});
  }

  std::vector<ReportRow> take() { return std::move(rows_); }

 private:
  std::string id_;
  std::chrono::steady_clock::time_point t0_;
  std::vector<ReportRow> rows_;
};

std::unique_ptr<SpfTable> make_table(const ExperimentConfig& cfg) {
  const std::uint64_t need = table_need(cfg);
  if (need == 0) return nullptr;
  try {
    return std::make_unique<SpfTable>(SpfTable::build(std::max<std::uint64_t>(need, 2), cfg.memory_budget));
  } catch (const CapacityError& e) {
    throw CapacityError(std::string("config /memory_budget: ") + e.what());
  }
}

std::vector<std::uint64_t> integer_xs(const json& j) {
  std::vector<std::uint64_t> out;
  const auto xs = number_list(j, "x", "", std::nullopt);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 1.0) || xs[i] != std::floor(xs[i])) field_error("/x/" + std::to_string(i), "expected a positive integer");
    out.push_back(static_cast<std::uint64_t>(xs[i]));
  }
  return out;
}

std::vector<unsigned> k_list(const json& j, std::vector<double> fallback) {
  std::vector<unsigned> out;
  for (const double k : number_list(j, "k", "", std::move(fallback))) {
    if (!(k >= 0.0) || k != std::floor(k)) field_error("/k", "expected non-negative integers");
    out.push_back(static_cast<unsigned>(k));
  }
  return out;
}

void run_bv(const ExperimentConfig& cfg, const SpfTable& table, RowSink& sink) {
  const json& j = cfg.raw;
  const Expression Qe = expression_field(j, "Q", "", "sqrt(x)/log(x)^2");
  const Expression Re = expression_field(j, "R", "", "1");
  const auto spec = function_field(j, "function", "", json{{"variant", "moebius"}});
  const std::string mode = string_field(j, "mode", "", std::string("max-over-a"));
  BvParams p;
  p.a = signed_field(j, "a", "", 1);
  p.D = integer_field(j, "D", "", 1);
  if (mode == "max-over-a") {
    p.mode = BvMode::MaxOverA;
  } else if (mode == "abs-over-r") {
    p.mode = BvMode::AbsOverR;
  } else if (mode == "signed") {
    p.mode = BvMode::Signed;
  } else {
    field_error("/mode", "unknown mode '" + mode + "'");
  }
  for (const std::uint64_t x : integer_xs(j)) {
    sink.start();
    const double xd = static_cast<double>(x);
    p.x = x;
    p.Q = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(positive_at(Qe, xd, "/Q"))));
    p.R = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(positive_at(Re, xd, "/R"))));
    const ProgressionEngine engine(tabulate(spec, x, table));
    const double v = bv_aggregate(p, engine, spec.K_bound());
    const std::string params = "Q=" + std::to_string(p.Q) + ";R=" + std::to_string(p.R) + ";a=" +
                               std::to_string(p.a) + ";D=" + std::to_string(p.D) + ";mode=" + mode +
                               ";f=" + spec.tag();
    sink.add(xd, params, "aggregate", v);
    sink.add(xd, params, "normalized", v / xd);
  }
}

void run_constants(const ExperimentConfig& cfg, RowSink& sink) {
  for (const double P : number_list(cfg.raw, "prime_limit", "", std::vector<double>{1e7})) {
    if (P < 100) field_error("/prime_limit", "prime limit must be >= 100");
    sink.start();
    const ConstantsReport c = global_constants(static_cast<std::uint64_t>(P));
    sink.add(P, "", "h", c.h, c.h_tail);
    sink.add(P, "", "lambda", c.lambda, c.lambda_tail);
    sink.add(P, "", "tail_bound", c.tail_bound);
  }
}

void run_tsum(const ExperimentConfig& cfg, const SpfTable& table, RowSink& sink) {
  const json& j = cfg.raw;
  const auto ns = number_list(j, "n", "", std::vector<double>{1.0});
  const bool two = j.contains("m");
  const auto ms = number_list(j, "m", "", std::vector<double>{1.0});
  const Expression R0e = expression_field(j, "R0", "", "sqrt(x)");
  for (const std::uint64_t R : integer_xs(j)) {
    for (const double nd : ns) {
      for (const double md : ms) {
        sink.start();
        const auto n = static_cast<std::uint64_t>(nd);
        const auto m = static_cast<std::uint64_t>(md);
        MainTermCheck c;
        std::string params = "n=" + std::to_string(n);
        if (two) {
          const double r0 = positive_at(R0e, static_cast<double>(R), "/R0");
          c = t2_sum(R, m, n, r0, table);
          params += ";m=" + std::to_string(m) + ";R0=" + fmt(r0);
        } else {
          c = t_sum(R, n, table);
        }
        sink.add(static_cast<double>(R), params, "exact", c.exact);
        sink.add(static_cast<double>(R), params, "main", c.main);
        sink.add(static_cast<double>(R), params, "error", c.error);
      }
    }
  }
}

LimitVariant variant_field(const json& j) {
  const std::string v = string_field(j, "variant", "", std::string("general"));
  if (v == "general") return LimitVariant::General;
  if (v == "strongly_additive") return LimitVariant::StronglyAdditive;
  if (v == "omega_same_argument") return LimitVariant::OmegaSameArgument;
  field_error("/variant", "unknown variant '" + v + "'");
}

void run_ew(const ExperimentConfig& cfg, const SpfTable& table, RowSink& sink) {
  const json& j = cfg.raw;
  const auto f = additive_field(j, "additive", "", "inverse_prime");
  const auto thetas = number_list(j, "theta", "", std::vector<double>{0.5, 1.0, 2.0});
  const auto P = integer_field(j, "prime_limit", "", 1'000'000);
  const LimitVariant variant = variant_field(j);
  std::optional<double> tol;
  if (j.contains("tolerance")) tol = number_field(j, "tolerance", "", std::nullopt);
  for (const std::uint64_t x : integer_xs(j)) {
    const double xd = static_cast<double>(x);
    for (const unsigned k : k_list(j, {2.0})) {
      sink.start();
      const CfReport cf = empirical_cf(x, k, f, thetas, table);
      const double r = (static_cast<double>(k) - 1.0) / std::log(std::log(xd));
      const std::string base = "k=" + std::to_string(k) + ";f=" + f.name() + ";r=" + fmt(r) + ";P=" + std::to_string(P);
      sink.add(xd, base, "scanned_count", static_cast<double>(cf.scanned_count));
      sink.add(xd, base, "pi_k", static_cast<double>(cf.pi_k));
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        const std::string params = base + ";theta=" + fmt(thetas[i]);
        sink.add(xd, params, "cf_re", cf.values[i].real());
        sink.add(xd, params, "cf_im", cf.values[i].imag());
        if (r < 0.0) continue;  // k = 0 has no limit law
        const auto lim = phi_limit(thetas[i], r, f, P, variant);
        sink.add(xd, params, "limit_re", lim.real());
        sink.add(xd, params, "limit_im", lim.imag());
        sink.add(xd, params, "abs_diff", std::abs(cf.values[i] - lim), tol);
      }
    }
  }
}

void run_ek(const ExperimentConfig& cfg, const SpfTable& table, RowSink& sink) {
  const json& j = cfg.raw;
  const auto f = additive_field(j, "additive", "", "omega");
  std::optional<double> tol;
  if (j.contains("tolerance")) tol = number_field(j, "tolerance", "", std::nullopt);
  for (const std::uint64_t x : integer_xs(j)) {
    const double xd = static_cast<double>(x);
    for (const unsigned k : k_list(j, {3.0})) {
      sink.start();
      const EkReport r = ek_distance(x, k, f, table);
      const std::string params = "k=" + std::to_string(k) + ";f=" + f.name();
      sink.add(xd, params, "A", r.A);
      sink.add(xd, params, "B", r.B);
      sink.add(xd, params, "count", static_cast<double>(r.count));
      sink.add(xd, params, "kubilius_ratio", r.kubilius_ratio);
      sink.add(xd, params, "kolmogorov", r.kolmogorov, tol);
    }
  }
}

void run_lil(const ExperimentConfig& cfg, const SpfTable* table, RowSink& sink) {
  const json& j = cfg.raw;
  const Expression xie = expression_field(j, "xi", "", "exp(exp(e))");
  LilSampler sampler = FullScan{};
  std::string sampler_desc = "full";
  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    const std::string kind = string_field(s, "kind", "/sampler", std::string("full"));
    if (kind == "sample") {
      if (!s.contains("seed")) field_error("/sampler/seed", "seed is required when sampling");
      WeightedSample w;
      w.size = integer_field(s, "size", "/sampler", std::nullopt);
      w.seed = integer_field(s, "seed", "/sampler", std::nullopt);
      sampler = w;
      sampler_desc = "sample(" + std::to_string(w.size) + "," + std::to_string(w.seed) + ")";
    } else if (kind != "full") {
      field_error("/sampler/kind", "expected 'full' or 'sample'");
    }
  }
  const double m_max = number_field(j, "m_max", "", 1.5);
  const double plus_min = number_field(j, "m_plus_min", "", 0.3);
  const double minus_max = number_field(j, "m_minus_max", "", -0.3);
  for (const std::uint64_t x : integer_xs(j)) {
    sink.start();
    const double xd = static_cast<double>(x);
    const double xi = positive_at(xie, xd, "/xi");
    std::vector<double> grid;
    if (j.contains("grid")) {
      grid = number_list(j, "grid", "", std::nullopt);
    } else {
      grid = default_lil_grid(xi, xd);
    }
    const SpfTable* t = (table != nullptr && table->limit() >= x) ? table : nullptr;
    const LilProfile prof = lil_profile(x, xi, grid, sampler, t);
    const std::string params = "xi=" + fmt(xi) + ";grid=" + std::to_string(prof.t_grid.size()) + ";sampler=" + sampler_desc;
    sink.add(xd, params, "samples", static_cast<double>(prof.samples));
    sink.add(xd, params, "total_weight", prof.M.total_weight());
    sink.add(xd, params + ";m_max=" + fmt(m_max), "p_M_le", prof.M.cdf(m_max));
    sink.add(xd, params + ";m_plus_min=" + fmt(plus_min), "p_Mplus_ge", 1.0 - prof.M_plus.cdf_left(plus_min));
    sink.add(xd, params + ";m_minus_max=" + fmt(minus_max), "p_Mminus_le", prof.M_minus.cdf(minus_max));
  }
}

void run_corr(const ExperimentConfig& cfg, const SpfTable& table, RowSink& sink) {
  const json& j = cfg.raw;
  const std::int64_t h = signed_field(j, "h", "", 1);
  if (h == 0) field_error("/h", "h must be nonzero");
  const bool vm = j.contains("weight") && j.at("weight") == "von_mangoldt";
  const CorrWeight w = vm ? CorrWeight(VonMangoldt{})
                          : CorrWeight(function_field(j, "function", "", json{{"variant", "piltz"}, {"z", 2}}));
  const std::string params = "h=" + std::to_string(h) + ";w=" +
                             (vm ? std::string("von_mangoldt") : std::get<MultiplicativeSpec>(w).tag());
  for (const std::uint64_t x : integer_xs(j)) {
    sink.start();
    const auto v = corr_tau(x, w, h, table);
    sink.add(static_cast<double>(x), params, "re", v.real());
    sink.add(static_cast<double>(x), params, "im", v.imag());
  }
}

void run_titchmarsh(const ExperimentConfig& cfg, const SpfTable& table, RowSink& sink) {
  const double h = default_constants().h;
  for (const std::uint64_t x : integer_xs(cfg.raw)) {
    sink.start();
    const double xd = static_cast<double>(x);
    const double S = corr_tau(x, VonMangoldt{}, -1, table).real();
    const double main = h * xd * std::log(xd);
    sink.add(xd, "", "S", S);
    sink.add(xd, "", "main", main);
    sink.add(xd, "", "ratio", S / main);
    sink.add(xd, "", "rel_error", std::fabs(S / main - 1.0));
  }
}

void run_hyperbola(const ExperimentConfig& cfg, const SpfTable& table, RowSink& sink) {
  for (const std::uint64_t x : integer_xs(cfg.raw)) {
    sink.start();
    const std::uint64_t a = hyperbola_tau(x);
    const std::uint64_t b = tau_summatory_direct(x, table);
    const double xd = static_cast<double>(x);
    sink.add(xd, "", "hyperbola", static_cast<double>(a));
    sink.add(xd, "", "direct", static_cast<double>(b));
    sink.add(xd, "", "match", a == b ? 1.0 : 0.0, 1.0);
  }
}

}  // namespace

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind == "identity-suite") {
    auto rows = identity_suite(integer_field(cfg.raw, "seed", "", 1), number_field(cfg.raw, "scale", "", 1.0));
    for (auto& r : rows) r.experiment = cfg.id;
    return rows;
  }
  const std::unique_ptr<SpfTable> table = make_table(cfg);
  RowSink sink(cfg.id);
  const auto need_table = [&]() -> const SpfTable& {
    if (!table) throw CapacityError("experiment needs an SPF table");
    return *table;
  };
  if (cfg.kind == "bv-scan") {
    run_bv(cfg, need_table(), sink);
  } else if (cfg.kind == "constants") {
    run_constants(cfg, sink);
  } else if (cfg.kind == "t-sum") {
    run_tsum(cfg, need_table(), sink);
  } else if (cfg.kind == "ew") {
    run_ew(cfg, need_table(), sink);
  } else if (cfg.kind == "ek") {
    run_ek(cfg, need_table(), sink);
  } else if (cfg.kind == "lil") {
    run_lil(cfg, table.get(), sink);
  } else if (cfg.kind == "corr") {
    run_corr(cfg, need_table(), sink);
  } else if (cfg.kind == "titchmarsh") {
    run_titchmarsh(cfg, need_table(), sink);
  } else if (cfg.kind == "hyperbola-check") {
    run_hyperbola(cfg, need_table(), sink);
  }
  return sink.take();
}

}  // namespace plab::lab
