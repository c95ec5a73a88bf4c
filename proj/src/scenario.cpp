#include "ncprob/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ncprob/clt.hpp"
#include "ncprob/ergodic.hpp"
#include "ncprob/indcheck.hpp"
#include "ncprob/symcheck.hpp"

namespace ncprob::cli {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_fail(const std::string& where, const std::string& msg) {
  throw ValidationError("config error at " + where + ": " + msg);
}

const ordered_json& need(const ordered_json& j, const std::string& key,
                         const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) config_fail(where, "missing field '" + key + "'");
  return *it;
}

Complex parse_omega(const ordered_json& j, const std::string& where) {
  if (j.contains("phase_degrees")) {
    const double deg = j.at("phase_degrees").get<double>();
    return std::polar(1.0, deg * M_PI / 180.0);
  }
  if (j.contains("re") && j.contains("im")) {
    return Complex(j.at("re").get<double>(), j.at("im").get<double>());
  }
  config_fail(where, "omega needs {re, im} or {phase_degrees}");
}

std::vector<int> parse_ints(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) config_fail(where, "expected an integer array");
  std::vector<int> out;
  for (const auto& e : j) out.push_back(e.get<int>());
  return out;
}

MonomialSpec parse_monomial(const ordered_json& j, const std::string& where) {
  MonomialSpec m{IndexTuple{parse_ints(need(j, "tuple", where), where)},
                 parse_ints(need(j, "basis", where), where)};
  m.validate();
  return m;
}

ordered_json complex_json(const Complex& z) {
  return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

struct ScenarioContext {
  std::optional<RandomSequenceModel> model;
  double tol_override = 0.0;

  const RandomSequenceModel& require_model(const std::string& where) const {
    if (!model) config_fail(where, "this check needs a 'model' in the scenario");
    return *model;
  }
  double tol(const ordered_json& check, double fallback) const {
    if (tol_override > 0.0) return tol_override;
    return check.value("tol", fallback);
  }
};

RandomSequenceModel build_model(const ordered_json& j) {
  const std::string where = "/model";
  const std::string kind = need(j, "kind", where).get<std::string>();
  const int window = need(j, "window", where).get<int>();
  if (kind == "iid_tensor") {
    const std::string base_kind = j.value("base", std::string("m2"));
    if (base_kind == "m2") {
      const BlockAlgebra base = BlockAlgebra::full_matrix(2);
      return iid_tensor_sequence(base, FaithfulState::normalized_trace(base),
                                 window);
    }
    if (base_kind == "c2") {
      const BlockAlgebra base = BlockAlgebra::commutative(2);
      return iid_tensor_sequence(base, FaithfulState::trace_p(j.value("p", 0.5)),
                                 window);
    }
    config_fail(where, "base must be 'm2' or 'c2'");
  }
  if (kind == "codomain_perturbed") {
    return codomain_perturbed_sequence(parse_omega(need(j, "omega", where), where),
                                       window);
  }
  if (kind == "coin_mixture") {
    std::vector<CoinAtom> atoms;
    for (const auto& a : need(j, "atoms", where)) {
      atoms.push_back({a.at("p").get<double>(), a.at("weight").get<double>()});
    }
    return coin_mixture_sequence(atoms, window);
  }
  if (kind == "yang_baxter") {
    const int d = j.value("d", 2);
    const std::string u = need(j, "unitary", where).get<std::string>();
    if (u == "flip") return yang_baxter_sequence(flip_unitary(d), d, window);
    if (u == "uomega") {
      if (d != 2) config_fail(where, "uomega requires d = 2");
      return yang_baxter_sequence(
          perturbation_unitary(parse_omega(need(j, "omega", where), where)), 2,
          window);
    }
    config_fail(where, "unitary must be 'flip' or 'uomega'");
  }
  config_fail(where, "unknown model kind '" + kind + "'");
}

Subalgebra conditioning_subalgebra(const RandomSequenceModel& model,
                                   const std::string& sel,
                                   const std::string& where) {
  if (sel == "scalars") {
    return scalar_subalgebra(model.ambient(), model.ambient_state());
  }
  if (sel == "fiber_scalars") {
    if (model.tail_candidate_generators().empty()) {
      config_fail(where, "model provides no fiber-scalar tail candidate");
    }
    return generate_subalgebra(model.ambient(), model.ambient_state(),
                               model.tail_candidate_generators());
  }
  config_fail(where, "conditioning must be 'scalars' or 'fiber_scalars'");
}

SymmetryKind parse_symmetry_kind(const std::string& s, const std::string& where) {
  if (s == "exchangeable") return SymmetryKind::Exchangeable;
  if (s == "spreadable") return SymmetryKind::Spreadable;
  if (s == "stationary") return SymmetryKind::Stationary;
  config_fail(where, "unknown symmetry kind '" + s + "'");
}

IndependenceMode parse_mode(const std::string& s, const std::string& where) {
  if (s == "CI") return IndependenceMode::CI;
  if (s == "CIo") return IndependenceMode::CIo;
  if (s == "CF") return IndependenceMode::CF;
  if (s == "CFo") return IndependenceMode::CFo;
  config_fail(where, "unknown independence mode '" + s + "'");
}

ordered_json symmetry_verdict_json(const SymmetryVerdict& v) {
  ordered_json j{{"kind", to_string(v.kind)},
                 {"degree", v.degree},
                 {"window", v.window},
                 {"tolerance", v.tolerance},
                 {"pass", v.pass},
                 {"max_violation", v.max_violation}};
  if (v.witness) {
    j["witness"] = ordered_json{
        {"tuple", v.witness->tuple.entries},
        {"canonical", v.witness->canonical.entries},
        {"basis", v.witness->basis_choice},
        {"value_tuple", complex_json(v.witness->value_tuple)},
        {"value_canonical", complex_json(v.witness->value_canonical)}};
  }
  return j;
}

ordered_json independence_report_json(const SequenceIndependenceReport& r) {
  ordered_json pairs = ordered_json::array();
  for (const auto& p : r.pairs) {
    ordered_json pj{{"I", p.I}, {"J", p.J}, {"max_violation", p.max_violation},
                    {"pass", p.pass}};
    if (p.witness) {
      pj["witness"] = ordered_json{{"x", p.witness->x_recipe},
                                   {"y", p.witness->y_recipe},
                                   {"lhs", complex_json(p.witness->state_lhs)},
                                   {"rhs", complex_json(p.witness->state_rhs)}};
    }
    pairs.push_back(std::move(pj));
  }
  return ordered_json{{"mode", to_string(r.mode)},
                      {"window", r.window},
                      {"max_set_size", r.max_set_size},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass},
                      {"max_violation", r.max_violation},
                      {"pairs", std::move(pairs)}};
}

// One executed check: raw pass/fail plus the expectation applied to it.
struct CheckOutcome {
  std::string type;
  std::string expect;   // "pass" | "fail" | "record"
  bool raw_pass = false;
  bool ok = false;
  double worst = 0.0;   // max violation / deviation, for the CSV table
  ordered_json details;
};

CheckOutcome run_check(const ScenarioContext& ctx, const ordered_json& check,
                       const std::string& where) {
  const std::string type = need(check, "type", where).get<std::string>();
  CheckOutcome out;
  out.type = type;
  out.expect = check.value("expect", std::string("pass"));
  if (out.expect != "pass" && out.expect != "fail" && out.expect != "record") {
    config_fail(where, "expect must be 'pass', 'fail' or 'record'");
  }

  if (type == "moment") {
    const auto& model = ctx.require_model(where);
    const MonomialSpec m = parse_monomial(check, where);
    const Complex value = model.psi_moment(m.tuple, m.basis_choice);
    const Complex expected = parse_omega(need(check, "value", where), where);
    const double tol = ctx.tol(check, 1e-12);
    out.raw_pass = std::abs(value - expected) <= tol;
    out.worst = std::abs(value - expected);
    out.details = ordered_json{{"tuple", m.tuple.entries},
                               {"basis", m.basis_choice},
                               {"value", complex_json(value)},
                               {"expected", complex_json(expected)},
                               {"tolerance", tol}};
  } else if (type == "symmetry") {
    const auto& model = ctx.require_model(where);
    const SymmetryKind kind = parse_symmetry_kind(
        need(check, "kind", where).get<std::string>(), where);
    const auto v = check_symmetry(model, kind, check.value("degree", 4),
                                  check.value("window", model.window()),
                                  ctx.tol(check, 1e-9));
    out.raw_pass = v.pass;
    out.worst = v.max_violation;
    out.details = symmetry_verdict_json(v);
  } else if (type == "hierarchy") {
    const auto& model = ctx.require_model(where);
    const auto audit = symmetry_hierarchy_audit(
        model, check.value("degree", 4), check.value("window", model.window()),
        ctx.tol(check, 1e-9));
    out.raw_pass = audit.exchangeable.pass && audit.spreadable.pass &&
                   audit.stationary.pass && audit.monotone;
    out.worst = std::max({audit.exchangeable.max_violation,
                          audit.spreadable.max_violation,
                          audit.stationary.max_violation});
    out.details = ordered_json{
        {"exchangeable", symmetry_verdict_json(audit.exchangeable)},
        {"spreadable", symmetry_verdict_json(audit.spreadable)},
        {"stationary", symmetry_verdict_json(audit.stationary)},
        {"monotone", audit.monotone}};
  } else if (type == "independence") {
    const auto& model = ctx.require_model(where);
    const Subalgebra N = conditioning_subalgebra(
        model, need(check, "conditioning", where).get<std::string>(), where);
    const auto r = check_sequence_independence(
        model, N, parse_mode(need(check, "mode", where).get<std::string>(), where),
        check.value("max_set_size", 2),
        check.value("window", std::min(model.materialized_window(), 4)),
        ctx.tol(check, 1e-9));
    out.raw_pass = r.pass;
    out.worst = r.max_violation;
    out.details = independence_report_json(r);
  } else if (type == "factorizability") {
    const auto& model = ctx.require_model(where);
    const Subalgebra N = conditioning_subalgebra(
        model, need(check, "conditioning", where).get<std::string>(), where);
    auto v = check_factorizability(model, N,
                                   parse_ints(need(check, "I", where), where),
                                   parse_ints(need(check, "J", where), where),
                                   check.value("joined", false),
                                   ctx.tol(check, 1e-9));
    out.raw_pass = v.pass;
    out.worst = v.max_violation;
    ordered_json j{{"I", v.I}, {"J", v.J}, {"pass", v.pass},
                   {"max_violation", v.max_violation}};
    if (v.witness) {
      j["witness"] = ordered_json{{"x", v.witness->x_recipe},
                                  {"y", v.witness->y_recipe},
                                  {"lhs", complex_json(v.witness->state_lhs)},
                                  {"rhs", complex_json(v.witness->state_rhs)}};
    }
    if (check.contains("expect_gap")) {
      const double want = check.at("expect_gap").get<double>();
      const bool gap_ok = std::abs(v.max_violation - want) <= 1e-10;
      j["expected_gap"] = want;
      // An expected-failure check also pins the size of the violation.
      if (!gap_ok) out.raw_pass = !out.raw_pass;
    }
    out.details = std::move(j);
  } else if (type == "zero_one") {
    const auto& model = ctx.require_model(where);
    const auto r = zero_one_diagnostic(
        model, check.value("window", std::min(model.materialized_window(), 4)),
        ctx.tol(check, 1e-8));
    out.raw_pass = r.applicable && r.trivial_tail;
    out.worst = r.max_deviation;
    out.details = ordered_json{{"applicable", r.applicable},
                               {"reason", r.reason},
                               {"trivial_tail", r.trivial_tail},
                               {"max_deviation", r.max_deviation}};
  } else if (type == "braid") {
    const std::string u = need(check, "unitary", where).get<std::string>();
    AlgElement el = u == "flip"
                        ? flip_unitary(check.value("d", 2))
                        : perturbation_unitary(parse_omega(
                              need(check, "omega", where), where));
    if (u != "flip" && u != "uomega") {
      config_fail(where, "unitary must be 'flip' or 'uomega'");
    }
    const auto r = check_braid_relation(el, ctx.tol(check, 1e-10));
    out.raw_pass = r.pass && r.distant_commutation;
    out.worst = r.braid_residual;
    out.details = ordered_json{{"pass", r.pass},
                               {"braid_residual", r.braid_residual},
                               {"unitarity_residual", r.unitarity_residual},
                               {"distant_commutation", r.distant_commutation}};
  } else if (type == "mixing") {
    const auto& model = ctx.require_model(where);
    const Subalgebra N = conditioning_subalgebra(
        model, check.value("conditioning", std::string("scalars")), where);
    const CondExp en =
        conditional_expectation(model.ambient(), model.ambient_state(), N);
    const MonomialSpec x = parse_monomial(need(check, "x", where), where);
    const MonomialSpec y = parse_monomial(need(check, "y", where), where);
    const double bound = check.value("max_gap", 1e-10);
    ordered_json rows = ordered_json::array();
    out.raw_pass = true;
    for (int k : parse_ints(need(check, "k_values", where), where)) {
      const double gap = mixing_gap(model, x, y, en, k);
      rows.push_back(ordered_json{{"k", k}, {"gap", gap}});
      out.worst = std::max(out.worst, gap);
      if (gap > bound) out.raw_pass = false;
    }
    out.details = ordered_json{{"x", x.label()}, {"y", y.label()},
                               {"max_gap", bound}, {"gaps", std::move(rows)}};
  } else if (type == "cesaro") {
    const auto& model = ctx.require_model(where);
    const MonomialSpec x = parse_monomial(need(check, "x", where), where);
    const MonomialSpec y = parse_monomial(need(check, "y", where), where);
    ordered_json rows = ordered_json::array();
    out.raw_pass = true;
    double max_term = 0.0;
    for (int k = 0; k < 2; ++k) {
      max_term = std::max(max_term, std::abs(shifted_moment(model, y, x, k)));
    }
    for (int n : parse_ints(need(check, "n_values", where), where)) {
      const Complex avg = cesaro_average(model, y, x, n);
      const Complex next = cesaro_average(model, y, x, n + 1);
      // Telescoping rate bound |M_n - M_{n+1}| <= 2 max / n.
      const double step = std::abs(avg - next);
      const bool ok = step <= 2.0 * std::max(max_term, 1.0) / n + 1e-12;
      rows.push_back(ordered_json{{"n", n}, {"value", complex_json(avg)},
                                  {"step", step}, {"rate_ok", ok}});
      if (!ok) out.raw_pass = false;
      out.worst = std::max(out.worst, step);
    }
    out.details = ordered_json{{"x", x.label()}, {"y", y.label()},
                               {"rows", std::move(rows)}};
  } else if (type == "tn") {
    const auto& model = ctx.require_model(where);
    const MonomialSpec x = parse_monomial(need(check, "x", where), where);
    ordered_json rows = ordered_json::array();
    out.raw_pass = true;
    for (int N : parse_ints(need(check, "N_values", where), where)) {
      const TNResult r = refined_average_TN(model, x, N);
      ordered_json entries = ordered_json::array();
      for (const auto& e : r.entries) {
        entries.push_back(ordered_json{{"y", e.y_label},
                                       {"value", complex_json(e.value)},
                                       {"std_error", e.std_error}});
      }
      rows.push_back(ordered_json{{"N", N}, {"exact", r.exact},
                                  {"samples", r.samples},
                                  {"entries", std::move(entries)}});
    }
    out.details = ordered_json{{"x", x.label()}, {"rows", std::move(rows)}};
  } else if (type == "endomorphism") {
    const auto& model = ctx.require_model(where);
    const auto v = induced_endomorphism_check(
        model, need(check, "N", where).get<int>(), check.value("degree", 3),
        check.value("window", model.window() - 1), ctx.tol(check, 1e-9));
    out.raw_pass = v.applicable && v.pass;
    out.worst = v.max_violation;
    out.details = ordered_json{{"applicable", v.applicable},
                               {"reason", v.reason},
                               {"pass", v.pass},
                               {"max_violation", v.max_violation},
                               {"samples", v.samples}};
  } else if (type == "clt") {
    const auto& model = ctx.require_model(where);
    const int h = check.value("x_basis", 1);
    const AlgElement x = model.domain_hermitian_basis().at(
        static_cast<std::size_t>(h));
    const int p = check.value("p", 4);
    const double tol = ctx.tol(check, 1e-10);
    ordered_json rows = ordered_json::array();
    out.raw_pass = true;
    for (int N : parse_ints(need(check, "N_values", where), where)) {
      const double brute = sn_moment_bruteforce(model, x, p, N);
      const double classes = sn_moment_by_classes(model, x, p, N);
      bool ok = std::abs(brute - classes) <= tol;
      ordered_json row{{"N", N}, {"brute", brute}, {"classes", classes}};
      if (check.contains("expected")) {
        // "expected" maps N to 3 - 2/N style closed forms: a flat array
        // aligned with N_values.
        const auto exp_vals = check.at("expected");
        const std::size_t idx = rows.size();
        const double want = exp_vals.at(idx).get<double>();
        row["expected"] = want;
        ok = ok && std::abs(brute - want) <= tol;
      }
      row["ok"] = ok;
      if (!ok) out.raw_pass = false;
      out.worst = std::max(out.worst, std::abs(brute - classes));
      rows.push_back(std::move(row));
    }
    const CLTLimit lim = clt_limit(model, x, p);
    ordered_json limit_json{{"a_p", lim.a_p}, {"limit", lim.limit}};
    if (check.contains("limit_expect")) {
      const double want = check.at("limit_expect").get<double>();
      limit_json["expected"] = want;
      if (std::abs(lim.limit - want) > tol) out.raw_pass = false;
    }
    out.details = ordered_json{{"p", p}, {"x_basis", h},
                               {"rows", std::move(rows)},
                               {"limit", std::move(limit_json)}};
  } else if (type == "clt_conditional") {
    const auto& model = ctx.require_model(where);
    const Subalgebra N = conditioning_subalgebra(
        model, check.value("conditioning", std::string("fiber_scalars")), where);
    const CondExp en =
        conditional_expectation(model.ambient(), model.ambient_state(), N);
    const int h = check.value("x_basis", 1);
    const AlgElement x = model.domain_hermitian_basis().at(
        static_cast<std::size_t>(h));
    const int p = check.value("p", 4);
    const auto ap = conditional_limit_Ap(model, x, p, en, true);
    // Closed form for commuting models: p!! E_N(z^2)^{p/2}.
    AlgElement z = model.embedding(0).apply(x);
    z -= en.apply(z);
    AlgElement ez2 = en.apply(z * z);
    AlgElement closed = AlgElement::identity(model.ambient());
    for (int k = 0; k < p / 2; ++k) closed = closed * ez2;
    closed = static_cast<double>(odd_double_factorial(p)) * closed;
    const double dev = gns_norm(model.ambient_state(), ap.value - closed);
    const double tol = ctx.tol(check, 1e-9);
    out.raw_pass = dev <= tol;
    out.worst = dev;
    out.details = ordered_json{{"p", p}, {"x_basis", h},
                               {"closed_form_deviation", dev},
                               {"tolerance", tol},
                               {"classes", ap.classes}};
  } else if (type == "combinatorics") {
    ordered_json rows = ordered_json::array();
    out.raw_pass = true;
    for (int p : parse_ints(check.value("ps", ordered_json{2, 4, 6, 8}), where)) {
      const long long pairings =
          static_cast<long long>(enumerate_pair_partitions(p).size());
      const long long pair_classes =
          static_cast<long long>(enumerate_pair_classes(p).size());
      const long long dfact = odd_double_factorial(p);
      long long fact = 1;
      for (int k = 2; k <= p / 2; ++k) fact *= k;
      const bool ok = pairings == dfact && pair_classes == dfact * fact;
      if (!ok) out.raw_pass = false;
      rows.push_back(ordered_json{{"p", p}, {"pair_partitions", pairings},
                                  {"pair_classes", pair_classes},
                                  {"double_factorial", dfact}, {"ok", ok}});
    }
    // q-interpolation endpoints against the two reference laws.
    const int qp = check.value("q_max_p", 10);
    bool q_ok = true;
    for (int p = 0; p <= qp; p += 2) {
      q_ok = q_ok &&
             std::abs(reference_moment(ReferenceLaw::QInterpolation, p, 1.0) -
                      reference_moment(ReferenceLaw::Gaussian, p)) < 1e-9 &&
             std::abs(reference_moment(ReferenceLaw::QInterpolation, p, 0.0) -
                      reference_moment(ReferenceLaw::Semicircle, p)) < 1e-9;
    }
    if (!q_ok) out.raw_pass = false;
    out.details = ordered_json{{"rows", std::move(rows)},
                               {"q_endpoints_ok", q_ok}};
  } else if (type == "commuting_square") {
    const std::string which = need(check, "case", where).get<std::string>();
    const BlockAlgebra m4 = BlockAlgebra::full_matrix(4);
    const FaithfulState tr4 = FaithfulState::normalized_trace(m4);
    const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
    const Matrix id2 = Matrix::Identity(2, 2);
    auto embed_left = [&](const Matrix& m) {
      AlgElement e = AlgElement::zero(m4);
      e.block(0) = kron(m, id2);
      return e;
    };
    auto embed_right = [&](const Matrix& m) {
      AlgElement e = AlgElement::zero(m4);
      e.block(0) = kron(id2, m);
      return e;
    };
    std::vector<AlgElement> left_gens, right_gens;
    for (const AlgElement& u : matrix_unit_basis(m2)) {
      left_gens.push_back(embed_left(u.block(0)));
      right_gens.push_back(embed_right(u.block(0)));
    }
    Subalgebra m1{m4, tr4, {}, false};
    Subalgebra m2sub{m4, tr4, {}, false};
    bool expect_all = true;
    if (which == "tensor") {
      m1 = generate_subalgebra(m4, tr4, left_gens);
      m2sub = generate_subalgebra(m4, tr4, right_gens);
    } else if (which == "uomega") {
      const Complex omega =
          parse_omega(check.value("omega", ordered_json{{"re", -1.0},
                                                        {"im", 0.0}}),
                      where);
      const AlgElement u = perturbation_unitary(omega);
      const AlgElement uadj = u.adjoint();
      std::vector<AlgElement> conj_gens;
      for (const AlgElement& g : left_gens) conj_gens.push_back(u * g * uadj);
      m1 = generate_subalgebra(m4, tr4, left_gens);
      m2sub = generate_subalgebra(m4, tr4, conj_gens);
    } else if (which == "diagonal") {
      // Both legs the diagonal of the left factor: the four conditions all
      // fail together (E1 E2 = E1 != E0).
      std::vector<AlgElement> diag_gens{embed_left((Matrix(2, 2) << 1, 0, 0, 0)
                                                       .finished())};
      m1 = generate_subalgebra(m4, tr4, diag_gens);
      m2sub = generate_subalgebra(m4, tr4, diag_gens);
      expect_all = false;
    } else {
      config_fail(where, "case must be 'tensor', 'uomega' or 'diagonal'");
    }
    const Subalgebra m0 = scalar_subalgebra(m4, tr4);
    const CondExp e1 = conditional_expectation(m4, tr4, m1);
    const CondExp e2 = conditional_expectation(m4, tr4, m2sub);
    const CondExp e0 = conditional_expectation(m4, tr4, m0);
    const auto r = verify_commuting_square(e1, e2, e0, ctx.tol(check, 1e-8));
    out.raw_pass = r.all_agree && (r.all_hold() == expect_all);
    out.worst = std::max({r.dev_independence, r.dev_range, r.dev_composition,
                          r.dev_commutation});
    out.details = ordered_json{{"case", which},
                               {"independence", r.independence},
                               {"range_condition", r.range_condition},
                               {"composition", r.composition},
                               {"commutation", r.commutation},
                               {"all_hold", r.all_hold()},
                               {"all_agree", r.all_agree},
                               {"expected_all_hold", expect_all}};
  } else {
    config_fail(where, "unknown check type '" + type + "'");
  }

  if (out.expect == "record") {
    out.ok = true;
  } else {
    out.ok = out.raw_pass == (out.expect == "pass");
  }
  return out;
}

}  // namespace

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunResult run_scenario_file(const std::string& path, const std::string& out_dir,
                            double tol_override) {
  RunResult result;
  ordered_json scenario;
  std::string name;
  try {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario: " + path);
    scenario = ordered_json::parse(in);
    name = need(scenario, "name", "/").get<std::string>();

    ScenarioContext ctx;
    ctx.tol_override = tol_override;
    if (scenario.contains("model")) {
      ctx.model = build_model(scenario.at("model"));
    }
    const auto& checks = need(scenario, "checks", "/");
    if (!checks.is_array() || checks.empty()) {
      config_fail("/checks", "must be a nonempty array");
    }

    std::vector<CheckOutcome> outcomes;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      outcomes.push_back(
          run_check(ctx, checks[i], "/checks/" + std::to_string(i)));
    }

    bool all_ok = true;
    ordered_json check_json = ordered_json::array();
    for (const auto& o : outcomes) {
      all_ok = all_ok && o.ok;
      check_json.push_back(ordered_json{{"type", o.type},
                                        {"expect", o.expect},
                                        {"raw_pass", o.raw_pass},
                                        {"ok", o.ok},
                                        {"details", o.details}});
    }
    // Scenario-level expectation: "fail" inverts the aggregate verdict.
    const std::string expect = scenario.value("expect", std::string("pass"));
    if (expect == "fail") {
      bool any_raw_fail = false;
      for (const auto& o : outcomes) any_raw_fail = any_raw_fail || !o.raw_pass;
      all_ok = any_raw_fail;
    }

    ordered_json report{{"artifact_version", kArtifactVersion},
                        {"scenario", name},
                        {"scenario_hash", file_hash_hex(path)},
                        {"tolerance_override",
                         tol_override > 0.0 ? ordered_json(tol_override)
                                            : ordered_json(nullptr)},
                        {"status", all_ok ? "ok" : "failed"},
                        {"checks", std::move(check_json)}};

    fs::create_directories(out_dir);
    const std::string stem = fs::path(path).stem().string();
    result.report_path = (fs::path(out_dir) / (stem + "_report.json")).string();
    std::ofstream rf(result.report_path);
    rf << report.dump(2) << "\n";

    result.table_path = (fs::path(out_dir) / (stem + "_table.csv")).string();
    std::ofstream tf(result.table_path);
    tf << "check,type,expect,raw_pass,ok,worst_deviation\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      tf << i << "," << o.type << "," << o.expect << ","
         << (o.raw_pass ? "true" : "false") << "," << (o.ok ? "true" : "false")
         << "," << std::scientific << o.worst << "\n";
    }

    result.all_ok = all_ok;
  } catch (const Error& e) {
    result.config_error = true;
    result.error = e.what();
  } catch (const nlohmann::json::exception& e) {
    result.config_error = true;
    result.error = std::string("JSON error: ") + e.what();
  }
  return result;
}

std::string scenario_dir() {
  if (const char* env = std::getenv("NCPROB_SCENARIO_DIR")) return env;
#ifdef NCPROB_SCENARIO_DIR
  return NCPROB_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

std::vector<std::pair<std::string, std::string>> list_scenarios() {
  std::vector<std::pair<std::string, std::string>> out;
  const fs::path dir = scenario_dir();
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    std::string desc;
    try {
      std::ifstream in(entry.path());
      const auto j = ordered_json::parse(in);
      desc = j.value("description", std::string());
    } catch (...) {
      desc = "(unreadable)";
    }
    out.emplace_back(entry.path().filename().string(), desc);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> check_kinds() {
  return {"moment", "symmetry", "hierarchy", "independence", "factorizability",
          "zero_one", "braid", "mixing", "cesaro", "tn", "endomorphism",
          "clt", "clt_conditional", "combinatorics", "commuting_square"};
}

std::string describe_check(const std::string& kind) {
  static const std::map<std::string, std::string> docs = {
      {"moment",
       "Evaluates one mixed moment psi(iota_{i1}(h) ... ) against an expected "
       "complex value. Fields: tuple, basis, value {re, im}, tol."},
      {"symmetry",
       "Symmetry verdict (exchangeable | spreadable | stationary): compares "
       "moments of every tuple of length <= degree with entries < window "
       "against its class-canonical representative over all hermitian basis "
       "monomials. A pass is evidence up to that degree and window only. "
       "Fields: kind, degree, window, tol."},
      {"exchangeable",
       "Symmetry check kind: moments invariant under arbitrary permutations "
       "of the index tuple. Tested for every tuple of length <= degree with "
       "entries < window against its relabeled canonical form; a pass is "
       "evidence up to that degree and window only."},
      {"spreadable",
       "Symmetry check kind: moments invariant under order-preserving "
       "relabelings of the index tuple. Tested for every tuple of length <= "
       "degree with entries < window against its order-canonical form; a "
       "pass is evidence up to that degree and window only."},
      {"stationary",
       "Symmetry check kind: moments invariant under index translation. "
       "Tested for every tuple of length <= degree with entries < window "
       "against its minimum-subtracted canonical form; a pass is evidence up "
       "to that degree and window only."},
      {"hierarchy",
       "Runs all three symmetry checks and asserts monotonicity: "
       "exchangeable => spreadable => stationary. Fields: degree, window."},
      {"independence",
       "Conditional independence/factorizability sweep (CI | CIo | CF | CFo) "
       "over index-set pairs in the window, conditioning on 'scalars' or "
       "'fiber_scalars'. Fields: mode, conditioning, max_set_size, window."},
      {"factorizability",
       "Single (I, J) factorizability check E(xy) = E(x)E(y). Fields: I, J, "
       "joined, conditioning, optional expect_gap."},
      {"zero_one",
       "Finite shadow of tail triviality for order-C-independent models: "
       "large-shift moments factorize to scalars. Fields: window, tol."},
      {"braid",
       "Braid relation residual of a unitary on two tensor legs. Fields: "
       "unitary (flip | uomega), omega, d, tol."},
      {"mixing",
       "Mixing gaps |psi(y* shift_k(x)) - psi(y* E_N(x))| over the listed "
       "shifts. Fields: x, y (monomials), k_values, conditioning, max_gap."},
      {"cesaro",
       "Cesaro averages of shifted moments with the telescoping rate bound. "
       "Fields: x, y, n_values."},
      {"tn",
       "Refined averaging operator T_N at the moment level: exact k-vector "
       "enumeration up to N = 4, seeded Monte Carlo beyond. Fields: x, "
       "N_values."},
      {"endomorphism",
       "Moment-level isometry of the induced endomorphism alpha_N, gated on "
       "spreadability. Fields: N, degree, window."},
      {"clt",
       "psi(S_N(x)^p) by brute force and order-class decomposition, plus the "
       "p!! a_p limit. Fields: x_basis, p, N_values, expected, limit_expect."},
      {"clt_conditional",
       "Operator-valued conditional limit A_p against the closed form "
       "p!! E_N(z^2)^{p/2}. Fields: x_basis, p, conditioning."},
      {"combinatorics",
       "Counting identities: |P_2(p)| = p!!, |O_2(p)| = p!! (p/2)!, and "
       "q-interpolation endpoints matching Gaussian/semicircle. Fields: ps, "
       "q_max_p."},
      {"commuting_square",
       "The four equivalent commuting-square conditions on an M_4 example "
       "(case: tensor | uomega | diagonal); asserts they agree."}};
  const auto it = docs.find(kind);
  if (it == docs.end()) {
    std::string valid;
    for (const auto& k : check_kinds()) {
      if (!valid.empty()) valid += ", ";
      valid += k;
    }
    throw ValidationError("unknown check kind '" + kind +
                          "'; valid kinds: " + valid);
  }
  return it->second;
}

}  // namespace ncprob::cli
