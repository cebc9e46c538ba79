#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sudkit/sudkit.hpp"

namespace {

using sudkit::json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericalAmbiguity = 3;

struct Options {
  int d = 2;
  int n = 1;
  double tol = 1e-10;
  std::string format = "json";
  std::uint64_t seed = 12345;
  std::string out;

  bool full = false;
  std::string tensor = "both";
  bool check_closure = false;
  std::string kind;
  std::vector<int> particles;
  int order = 2;
  int alpha = 0;
  int beta = 1;
  std::string h_file;
  std::string builtin;
};

std::string num17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << payload;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void append_matrix_csv(std::ostringstream& csv, const std::string& name,
                       const sudkit::Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      csv << name << ',' << r << ',' << c << ',' << num17(m(r, c).real()) << ','
          << num17(m(r, c).imag()) << '\n';
}

int run_basis(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "index,row,col,re,im\n";
    for (std::size_t i = 0; i < basis.generators.size(); ++i)
      append_matrix_csv(csv, std::to_string(i), basis.generators[i]);
    emit(csv.str(), opt.out);
  } else {
    emit(dump(sudkit::basis_to_json(basis)), opt.out);
  }
  return kExitPass;
}

int run_structure(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  const sudkit::StructureTensors tensors = sudkit::compute_structure_tensors(basis);
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "tensor,i,j,k,value\n";
    const auto rows = [&](const sudkit::SparseTensor3& t, const char* name) {
      if (opt.full) {
        const int n = t.index_size();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              const double v = t.value(i, j, k);
              if (v != 0.0) csv << name << ',' << i << ',' << j << ',' << k << ',' << num17(v) << '\n';
            }
      } else {
        for (const sudkit::TensorEntry& e : t.canonical_entries())
          csv << name << ',' << e.i << ',' << e.j << ',' << e.k << ',' << num17(e.value) << '\n';
      }
    };
    if (opt.tensor != "d") rows(tensors.f, "f");
    if (opt.tensor != "f") rows(tensors.d_sym, "d");
    emit(csv.str(), opt.out);
  } else {
    json doc;
    if (opt.tensor == "f")
      doc = sudkit::tensor_to_json(tensors.f, tensors.d, "f", opt.full);
    else if (opt.tensor == "d")
      doc = sudkit::tensor_to_json(tensors.d_sym, tensors.d, "d", opt.full);
    else
      doc = sudkit::structure_tensors_to_json(tensors, opt.full);
    emit(dump(doc), opt.out);
  }
  return kExitPass;
}

int run_verify(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  const sudkit::StructureTensors tensors = sudkit::compute_structure_tensors(basis);
  const std::vector<sudkit::IdentityReport> reports =
      sudkit::verify_identities(tensors, basis, opt.tol);
  bool all_passed = true;
  for (const sudkit::IdentityReport& r : reports) all_passed = all_passed && r.passed;
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "identity,max_residual,passed,d\n";
    for (const sudkit::IdentityReport& r : reports)
      csv << sudkit::identity_label(r.identity) << ',' << num17(r.max_residual) << ','
          << (r.passed ? "true" : "false") << ',' << r.d << '\n';
    emit(csv.str(), opt.out);
  } else {
    emit(dump(sudkit::identity_reports_to_json(reports, opt.tol)), opt.out);
  }
  return all_passed ? kExitPass : kExitVerificationFailure;
}

int run_collective(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  const sudkit::CollectiveErrorSet set = sudkit::collective_set(basis, opt.n);
  double closure_residual = -1.0;
  if (opt.check_closure) {
    const sudkit::StructureTensors tensors = sudkit::compute_structure_tensors(basis);
    closure_residual = 0.0;
    const int n = set.size();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        sudkit::Matrix rhs = sudkit::Matrix::Zero(set.operators[0].matrix.rows(),
                                                  set.operators[0].matrix.cols());
        for (int k = 0; k < n; ++k) {
          const double f = tensors.f.value(i, j, k);
          if (f != 0.0) rhs += sudkit::Complex(0, 2.0 * f) * set.operators[static_cast<std::size_t>(k)].matrix;
        }
        closure_residual = std::max(
            closure_residual,
            sudkit::max_abs(set.operators[static_cast<std::size_t>(i)].matrix *
                                set.operators[static_cast<std::size_t>(j)].matrix -
                            set.operators[static_cast<std::size_t>(j)].matrix *
                                set.operators[static_cast<std::size_t>(i)].matrix -
                            rhs));
      }
  }
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "operator,row,col,re,im\n";
    for (const sudkit::ManyBodyOperator& s : set.operators)
      append_matrix_csv(csv, s.label, s.matrix);
    emit(csv.str(), opt.out);
  } else {
    json operators = json::array();
    for (const sudkit::ManyBodyOperator& s : set.operators)
      operators.push_back(sudkit::operator_to_json(s));
    json doc{{"d", set.d}, {"n", set.n_particles}, {"operators", std::move(operators)}};
    if (closure_residual >= 0.0) doc["closure_residual"] = closure_residual;
    emit(dump(doc), opt.out);
  }
  if (opt.check_closure && closure_residual > opt.tol) return kExitVerificationFailure;
  return kExitPass;
}

int run_invariants(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  const sudkit::StructureTensors tensors = sudkit::compute_structure_tensors(basis);

  if (opt.kind == "j3") {
    const sudkit::J3Report report = sudkit::verify_j3_decomposition(basis, tensors, opt.n);
    bool ok = report.partition_residual <= opt.tol;
    for (const sudkit::J3ClassFit& c : report.classes) ok = ok && c.fit_residual <= opt.tol;
    if (opt.format == "csv") {
      std::ostringstream csv;
      csv << "class,fit_residual\n";
      csv << "partition," << num17(report.partition_residual) << '\n';
      for (const sudkit::J3ClassFit& c : report.classes)
        csv << c.class_name << ',' << num17(c.fit_residual) << '\n';
      emit(csv.str(), opt.out);
    } else {
      emit(dump(sudkit::j3_report_to_json(report)), opt.out);
    }
    return ok ? kExitPass : kExitVerificationFailure;
  }

  sudkit::InvariantOperator invariant;
  double centrality = 0.0;
  json extra;
  if (opt.kind == "c2" || opt.kind == "c3" || opt.kind == "cn") {
    sudkit::Matrix m;
    int order = 2;
    if (opt.kind == "c2") {
      m = sudkit::casimir_c2(basis);
    } else if (opt.kind == "c3") {
      m = sudkit::casimir_c3(basis, tensors);
      order = 3;
    } else {
      m = sudkit::casimir_cn(basis, tensors, opt.order);
      order = opt.order;
    }
    invariant = {opt.kind == "cn" ? sudkit::InvariantKind::cn
                                  : (opt.kind == "c2" ? sudkit::InvariantKind::c2
                                                      : sudkit::InvariantKind::c3),
                 {},
                 order,
                 {opt.d, 1, m, "C" + std::to_string(order)}};
    for (const sudkit::Matrix& g : basis.generators)
      centrality = std::max(centrality, sudkit::max_abs(m * g - g * m));
  } else {
    const sudkit::CollectiveErrorSet set = sudkit::collective_set(basis, opt.n);
    if (opt.kind == "j2") {
      invariant = sudkit::collective_j2(set);
      extra["pairwise_decomposition_residual"] =
          sudkit::j2_pairwise_decomposition_residual(basis, set);
    } else if (opt.kind == "i2") {
      if (opt.particles.size() != 2)
        throw std::invalid_argument("invariants: --particles must list 2 indices for i2");
      invariant = sudkit::invariant_i2(basis, opt.particles[0], opt.particles[1], opt.n);
    } else if (opt.kind == "i3" || opt.kind == "i4") {
      if (opt.particles.size() != 3)
        throw std::invalid_argument("invariants: --particles must list 3 indices for " + opt.kind);
      invariant = opt.kind == "i3"
                      ? sudkit::invariant_i3(basis, tensors, opt.particles[0], opt.particles[1],
                                             opt.particles[2], opt.n)
                      : sudkit::invariant_i4(basis, tensors, opt.particles[0], opt.particles[1],
                                             opt.particles[2], opt.n);
    } else {
      throw std::invalid_argument("invariants: unknown --kind " + opt.kind);
    }
    centrality = sudkit::commutes_with_all(invariant.op, set, opt.tol).max_residual;
  }

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "index,eigenvalue\n";
    const sudkit::RealVector w = sudkit::hermitian_spectrum(invariant.op.matrix);
    for (Eigen::Index i = 0; i < w.size(); ++i) csv << i << ',' << num17(w(i)) << '\n';
    emit(csv.str(), opt.out);
  } else {
    json doc = sudkit::invariant_to_json(invariant, centrality);
    for (auto& [key, value] : extra.items()) doc[key] = value;
    emit(dump(doc), opt.out);
  }
  return centrality <= opt.tol ? kExitPass : kExitVerificationFailure;
}

int run_dfs(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  const sudkit::CollectiveErrorSet set = sudkit::collective_set(basis, opt.n);
  const sudkit::DfsDecomposition decomposition = sudkit::decompose(set, opt.tol, opt.seed);

  json doc = sudkit::decomposition_to_json(decomposition);
  if (opt.n == 3) {
    const sudkit::StructureTensors tensors = sudkit::compute_structure_tensors(basis);
    const sudkit::LogicalOperators logical = sudkit::logical_paulis(basis, tensors);
    json section = json::array();
    for (const sudkit::ManyBodyOperator* op : {&logical.x_bar, &logical.y_bar, &logical.z_bar}) {
      const sudkit::CompatibilityReport report =
          sudkit::compatibility_check(*op, decomposition, set, opt.tol);
      section.push_back(json{{"label", op->label},
                             {"commutation_residual", report.commutation_residual},
                             {"max_leakage", report.leakage.size() > 0
                                                 ? report.leakage.maxCoeff()
                                                 : 0.0}});
    }
    doc["logical"] = std::move(section);
  }

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "block,irrep_dim,multiplicity,casimir_value,j_label\n";
    for (const sudkit::DfsBlock& b : decomposition.blocks) {
      csv << b.id << ',' << b.irrep_dim << ',' << b.multiplicity << ','
          << num17(b.casimir_value) << ',';
      if (b.j_label) csv << num17(*b.j_label);
      csv << '\n';
    }
    emit(csv.str(), opt.out);
  } else {
    emit(dump(doc), opt.out);
  }
  return kExitPass;
}

int run_exchange(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  if (opt.alpha < 0 || opt.alpha >= opt.n || opt.beta < 0 || opt.beta >= opt.n)
    throw std::invalid_argument("exchange: particle indices out of range");
  const sudkit::ManyBodyOperator u = sudkit::exchange_gate(basis, opt.alpha, opt.beta, opt.n);
  const sudkit::Complex expected = sudkit::exchange_expected_phase(opt.d);

  const int d = opt.d;
  std::int64_t stride_a = 1, stride_b = 1;
  for (int p = opt.alpha + 1; p < opt.n; ++p) stride_a *= d;
  for (int p = opt.beta + 1; p < opt.n; ++p) stride_b *= d;

  double offdiag_residual = 0.0, column_leakage = 0.0, diag_residual = 0.0;
  json table = json::array();
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      const std::int64_t in_state = p * stride_a + q * stride_b;
      const std::int64_t out_state = q * stride_a + p * stride_b;
      const sudkit::Complex amp = u.matrix(out_state, in_state);
      const double residual = std::abs(amp - expected);
      if (p == q)
        diag_residual = std::max(diag_residual, residual);
      else
        offdiag_residual = std::max(offdiag_residual, residual);
      for (Eigen::Index r = 0; r < u.matrix.rows(); ++r) {
        if (r == out_state) continue;
        column_leakage = std::max(column_leakage, std::abs(u.matrix(r, in_state)));
      }
      table.push_back(json{{"p", p},
                           {"q", q},
                           {"amp", sudkit::complex_to_json(amp)},
                           {"residual", residual}});
    }

  const bool ok = offdiag_residual <= opt.tol && column_leakage <= opt.tol;
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "p,q,re,im,expected_re,expected_im,residual\n";
    for (const json& row : table)
      csv << row["p"].get<int>() << ',' << row["q"].get<int>() << ','
          << num17(row["amp"][0].get<double>()) << ',' << num17(row["amp"][1].get<double>())
          << ',' << num17(expected.real()) << ',' << num17(expected.imag()) << ','
          << num17(row["residual"].get<double>()) << '\n';
    emit(csv.str(), opt.out);
  } else {
    json doc{{"d", opt.d},
             {"n", opt.n},
             {"alpha", opt.alpha},
             {"beta", opt.beta},
             {"expected_phase", sudkit::complex_to_json(expected)},
             {"offdiag_max_residual", offdiag_residual},
             {"diag_max_residual", diag_residual},
             {"column_leakage", column_leakage},
             {"table", std::move(table)}};
    emit(dump(doc), opt.out);
  }
  return ok ? kExitPass : kExitVerificationFailure;
}

int run_compat(const Options& opt) {
  const sudkit::GeneratorBasis basis = sudkit::build_basis(opt.d);
  const sudkit::CollectiveErrorSet set = sudkit::collective_set(basis, opt.n);

  sudkit::ManyBodyOperator h;
  if (!opt.h_file.empty()) {
    std::ifstream f(opt.h_file);
    if (!f) throw std::invalid_argument("compat: cannot open " + opt.h_file);
    json doc = json::parse(f, nullptr, true);
    h = sudkit::operator_from_json(doc);
    if (h.d != opt.d || h.n_particles != opt.n)
      throw std::invalid_argument("compat: operator in file does not match --d/--n");
  } else if (!opt.builtin.empty()) {
    if (opt.builtin == "j2") {
      h = sudkit::collective_j2(set).op;
    } else if (opt.builtin == "site-x") {
      h = sudkit::embed(basis.generators[0], 0, opt.n, "site-x");
    } else if (opt.builtin == "logical-x" || opt.builtin == "logical-y" ||
               opt.builtin == "logical-z") {
      if (opt.n != 3) throw std::invalid_argument("compat: logical operators need --n 3");
      const sudkit::StructureTensors tensors = sudkit::compute_structure_tensors(basis);
      const sudkit::LogicalOperators logical = sudkit::logical_paulis(basis, tensors);
      h = opt.builtin == "logical-x" ? logical.x_bar
                                     : (opt.builtin == "logical-y" ? logical.y_bar
                                                                   : logical.z_bar);
    } else {
      throw std::invalid_argument("compat: unknown --builtin " + opt.builtin);
    }
  } else {
    throw std::invalid_argument("compat: provide --hamiltonian FILE or --builtin NAME");
  }

  const sudkit::DfsDecomposition decomposition = sudkit::decompose(set, opt.tol, opt.seed);
  const sudkit::CompatibilityReport report =
      sudkit::compatibility_check(h, decomposition, set, opt.tol);

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "from,to,leakage\n";
    for (Eigen::Index r = 0; r < report.leakage.rows(); ++r)
      for (Eigen::Index c = 0; c < report.leakage.cols(); ++c)
        if (r != c) csv << r << ',' << c << ',' << num17(report.leakage(r, c)) << '\n';
    emit(csv.str(), opt.out);
  } else {
    json doc = sudkit::compatibility_to_json(report);
    doc["label"] = h.label;
    emit(dump(doc), opt.out);
  }
  return report.commutes ? kExitPass : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"su(d) generator basis, collective invariants, and DFS toolkit"};
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&opt](CLI::App* sub, bool with_n) {
    sub->add_option("--d", opt.d, "Single-particle dimension (>= 2)");
    if (with_n) sub->add_option("--n", opt.n, "Number of particles");
    sub->add_option("--tol", opt.tol, "Verification tolerance");
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", opt.seed, "Seed for randomized probes");
    sub->add_option("--out", opt.out, "Write output to this file instead of stdout");
  };

  CLI::App* basis = app.add_subcommand("basis", "Emit the generator basis");
  add_common(basis, false);

  CLI::App* structure = app.add_subcommand("structure", "Emit the structure constants");
  add_common(structure, false);
  structure->add_option("--tensor", opt.tensor, "Which tensor to emit")
      ->check(CLI::IsMember({"f", "d", "both"}));
  structure->add_flag("--full", opt.full, "Expand all index orders, not just canonical");

  CLI::App* verify = app.add_subcommand("verify", "Run the structure-constant identity suite");
  add_common(verify, false);

  CLI::App* collective = app.add_subcommand("collective", "Emit the collective operators");
  add_common(collective, true);
  collective->add_flag("--check", opt.check_closure, "Also verify the commutation closure");

  CLI::App* invariants = app.add_subcommand("invariants", "Build and check invariant operators");
  add_common(invariants, true);
  invariants->add_option("--kind", opt.kind, "c2|c3|cn|j2|i2|i3|i4|j3")->required();
  invariants->add_option("--order", opt.order, "Casimir order for --kind cn");
  invariants->add_option("--particles", opt.particles, "Particle indices for i2/i3/i4")
      ->delimiter(',');

  CLI::App* dfs = app.add_subcommand("dfs", "Decompose into collective-noise-free blocks");
  add_common(dfs, true);

  CLI::App* exchange = app.add_subcommand("exchange", "Build and check the exchange gate");
  add_common(exchange, true);
  exchange->add_option("--alpha", opt.alpha, "First particle");
  exchange->add_option("--beta", opt.beta, "Second particle");

  CLI::App* compat = app.add_subcommand("compat", "Check a Hamiltonian against the decomposition");
  add_common(compat, true);
  compat->add_option("--hamiltonian", opt.h_file, "Operator JSON file");
  compat->add_option("--builtin", opt.builtin, "j2|site-x|logical-x|logical-y|logical-z");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (app.got_subcommand(exchange) && exchange->count("--n") == 0) opt.n = 2;
    if (app.got_subcommand(basis)) return run_basis(opt);
    if (app.got_subcommand(structure)) return run_structure(opt);
    if (app.got_subcommand(verify)) return run_verify(opt);
    if (app.got_subcommand(collective)) return run_collective(opt);
    if (app.got_subcommand(invariants)) return run_invariants(opt);
    if (app.got_subcommand(dfs)) return run_dfs(opt);
    if (app.got_subcommand(exchange)) return run_exchange(opt);
    if (app.got_subcommand(compat)) return run_compat(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const sudkit::DegeneracyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalAmbiguity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerificationFailure;
  }
  return kExitInvalidInput;
}
