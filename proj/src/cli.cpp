// SPDX-License-Identifier: Apache-2.0

#include "qres/cli.hpp"

#include "qres/bounds.hpp"
#include "qres/codesim.hpp"
#include "qres/entropy.hpp"
#include "qres/json_io.hpp"
#include "qres/qcore.hpp"
#include "qres/rng.hpp"
#include "qres/schurweyl.hpp"
#include "qres/twirl.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <variant>

namespace qres::cli {

namespace {

using qcore::DensityMatrix;
using qcore::DomainError;
using qcore::Matrix;
using qcore::Vector;

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Builder {
  std::string name;
  std::vector<std::string> args;
};

Builder parse_builder(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return Builder{text, {}};
  if (text.back() != ')') {
    throw UsageError("malformed builder '" + text + "' (missing ')')");
  }
  Builder b{text.substr(0, open), {}};
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::stringstream ss(inner);
  std::string piece;
  while (std::getline(ss, piece, ',')) b.args.push_back(piece);
  return b;
}

int int_arg(const Builder& b, size_t index) {
  try {
    return std::stoi(b.args.at(index));
  } catch (const std::exception&) {
    throw UsageError("builder '" + b.name + "' needs integer argument " +
                     std::to_string(index + 1));
  }
}

double double_arg(const Builder& b, size_t index) {
  try {
    return std::stod(b.args.at(index));
  } catch (const std::exception&) {
    throw UsageError("builder '" + b.name + "' needs numeric argument " +
                     std::to_string(index + 1));
  }
}

void need_args(const Builder& b, size_t count) {
  if (b.args.size() != count) {
    throw UsageError("builder '" + b.name + "' takes " +
                     std::to_string(count) + " argument(s)");
  }
}

bool looks_like_path(const std::string& name) {
  return name.find('/') != std::string::npos ||
         name.find(".json") != std::string::npos;
}

constexpr const char* kStateVocabulary =
    "bell, plus, uniform_superposition(d), optimal_bipartite(d), "
    "gibbs(hfile,beta), or a density-matrix JSON file";
constexpr const char* kSigmaVocabulary =
    "any state builder, dephased, depolarized, local-twirled(dA,dB), "
    "permutation-twirled(n,d), collective-twirled(n,d)";
constexpr const char* kRdmVocabulary =
    "dephasing, depolarizing, local(dA,dB), permutation(n,d), "
    "collective(n,d), or a channel JSON file";

DensityMatrix build_state(const std::string& spec) {
  const Builder b = parse_builder(spec);
  if (b.name == "bell") {
    Vector v = Vector::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    return qcore::PureState(v).to_density();
  }
  if (b.name == "plus") {
    Vector v = Vector::Constant(2, 1.0 / std::sqrt(2.0));
    return qcore::PureState(v).to_density();
  }
  if (b.name == "uniform_superposition") {
    need_args(b, 1);
    const int d = int_arg(b, 0);
    if (d < 1) throw UsageError("uniform_superposition needs d >= 1");
    Vector v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    return qcore::PureState(v).to_density();
  }
  if (b.name == "optimal_bipartite") {
    need_args(b, 1);
    return twirl::optimal_bipartite_state(int_arg(b, 0)).to_density();
  }
  if (b.name == "gibbs") {
    need_args(b, 2);
    const qcore::HermitianObservable h(
        io::matrix_from_json(io::load_json_file(b.args[0])), "energy");
    return bounds::gibbs_state(h, double_arg(b, 1));
  }
  if (looks_like_path(spec)) {
    return io::density_from_json(io::load_json_file(spec));
  }
  throw UsageError("unknown state builder '" + spec + "'; expected " +
                   std::string(kStateVocabulary));
}

// Factor a composite dimension into (a, b) with a = b when possible.
std::pair<int, int> square_split(int dim) {
  const int root = static_cast<int>(std::lround(std::sqrt(double(dim))));
  if (root * root == dim) return {root, root};
  throw UsageError(
      "cannot infer local dimensions from a non-square composite; pass them "
      "explicitly, e.g. local-twirled(2,3)");
}

DensityMatrix build_sigma(const std::string& spec, const DensityMatrix& rho) {
  const Builder b = parse_builder(spec);
  if (b.name == "dephased") {
    return twirl::dephasing_channel(rho.dim()).apply(rho);
  }
  if (b.name == "depolarized") {
    return twirl::depolarizing_channel(rho.dim()).apply(rho);
  }
  if (b.name == "local-twirled") {
    int da, db;
    if (b.args.empty()) {
      std::tie(da, db) = square_split(rho.dim());
    } else {
      need_args(b, 2);
      da = int_arg(b, 0);
      db = int_arg(b, 1);
    }
    return twirl::local_unital_twirl(da, db).apply(rho);
  }
  if (b.name == "permutation-twirled") {
    need_args(b, 2);
    return twirl::permutation_twirl(int_arg(b, 0), int_arg(b, 1)).apply(rho);
  }
  if (b.name == "collective-twirled") {
    need_args(b, 2);
    return schurweyl::collective_twirl(int_arg(b, 0), int_arg(b, 1)).apply(rho);
  }
  try {
    return build_state(spec);
  } catch (const UsageError&) {
    throw UsageError("unknown sigma builder '" + spec + "'; expected " +
                     std::string(kSigmaVocabulary));
  }
}

struct RdmChoice {
  std::optional<twirl::TwirlChannel> twirl_channel;
  std::optional<qcore::QuantumChannel> plain_channel;  // idempotent, not a twirl
};

RdmChoice build_rdm(const std::string& spec, int dim) {
  const Builder b = parse_builder(spec);
  RdmChoice out;
  if (b.name == "dephasing") {
    out.twirl_channel = twirl::dephasing_channel(dim);
  } else if (b.name == "depolarizing") {
    out.twirl_channel = twirl::depolarizing_channel(dim);
  } else if (b.name == "local") {
    need_args(b, 2);
    out.twirl_channel = twirl::local_unital_twirl(int_arg(b, 0), int_arg(b, 1));
  } else if (b.name == "permutation") {
    need_args(b, 2);
    out.twirl_channel = twirl::permutation_twirl(int_arg(b, 0), int_arg(b, 1));
  } else if (b.name == "collective") {
    need_args(b, 2);
    out.twirl_channel = schurweyl::collective_twirl(int_arg(b, 0), int_arg(b, 1));
  } else if (looks_like_path(spec)) {
    qcore::QuantumChannel channel =
        io::channel_from_json(io::load_json_file(spec));
    try {
      out.twirl_channel = twirl::TwirlChannel::from_channel(
          channel, twirl::TwirlKind::custom, "custom(" + spec + ")");
    } catch (const DomainError&) {
      // Idempotent but not self-adjoint: usable for the upper bound only.
      out.plain_channel = std::move(channel);
    }
  } else {
    throw UsageError("unknown rdm builder '" + spec + "'; expected " +
                     std::string(kRdmVocabulary));
  }
  if (out.twirl_channel && out.twirl_channel->dim() != dim) {
    throw UsageError("rdm dimension does not match the state");
  }
  if (out.plain_channel && out.plain_channel->dim_in() != dim) {
    throw UsageError("rdm dimension does not match the state");
  }
  return out;
}

twirl::FiniteUnitaryGroup encoding_group_for(const std::string& rdm_spec,
                                             int dim) {
  const Builder b = parse_builder(rdm_spec);
  if (b.name == "dephasing") return twirl::z_group(dim);
  if (b.name == "depolarizing") return twirl::heisenberg_weyl_group(dim);
  if (b.name == "local") {
    need_args(b, 2);
    return twirl::pauli_group_on_A(int_arg(b, 0), int_arg(b, 1));
  }
  if (b.name == "permutation") {
    need_args(b, 2);
    return twirl::symmetric_group_unitaries(int_arg(b, 0), int_arg(b, 1));
  }
  throw UsageError(
      "no finite encoding alphabet for rdm '" + rdm_spec +
      "'; pass --group with an explicit group file (collective twirls have "
      "no finite alphabet)");
}

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
  } else {
    io::write_text_file(out_path, text);
  }
}

std::vector<long long> parse_copies_list(const std::vector<std::string>& raw) {
  std::vector<long long> out;
  for (const std::string& item : raw) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const long long lo = std::stoll(item.substr(0, dots));
      const long long hi = std::stoll(item.substr(dots + 2));
      if (lo < 1 || hi < lo) throw UsageError("bad range '" + item + "'");
      for (long long n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(std::stoll(item));
    }
  }
  if (out.empty()) throw UsageError("empty N list");
  return out;
}

// ---------------------------------------------------------------------------

int run_entropy(const std::string& rho_spec, const std::string& sigma_spec,
                double eps, double delta, const std::string& out_path,
                std::ostream& out) {
  const DensityMatrix rho = build_state(rho_spec);
  const DensityMatrix sigma = build_sigma(sigma_spec, rho);
  using entropy::ExtReal;
  using entropy::Quantity;

  std::vector<entropy::EntropicValue> values;
  values.push_back(entropy::make_entropic(
      Quantity::S, ExtReal::finite(entropy::von_neumann_entropy(rho))));
  const ExtReal d = entropy::relative_entropy(rho, sigma);
  values.push_back(entropy::make_entropic(Quantity::D, d));
  if (!d.infinite) {
    values.push_back(entropy::make_entropic(
        Quantity::V,
        ExtReal::finite(entropy::relative_entropy_variance(rho, sigma))));
    values.push_back(entropy::make_entropic(
        Quantity::D2,
        ExtReal::finite(entropy::collision_relative_entropy(rho, sigma))));
  }
  values.push_back(entropy::make_entropic(
      Quantity::Ds, entropy::info_spectrum_relative_entropy(rho, sigma, delta),
      delta));
  values.push_back(entropy::make_entropic(
      Quantity::DH,
      entropy::hypothesis_testing_relative_entropy(rho, sigma, eps), eps));

  io::json j;
  j["dim"] = rho.dim();
  j["S_rho"] = entropy::von_neumann_entropy(rho);
  j["S_sigma"] = entropy::von_neumann_entropy(sigma);
  for (const entropy::EntropicValue& value : values) {
    const char* key = nullptr;
    switch (value.quantity) {
      case Quantity::S: key = "S"; break;
      case Quantity::D: key = "D"; break;
      case Quantity::V: key = "V"; break;
      case Quantity::D2: key = "D2"; break;
      case Quantity::Ds: key = "Ds"; break;
      case Quantity::DH: key = "DH"; break;
      default: break;
    }
    if (key == nullptr) continue;
    if (value.parameter) {
      const char* param_name = value.quantity == Quantity::Ds ? "delta" : "eps";
      j[key] = io::json{{param_name, *value.parameter},
                        {"value", io::ext_real_to_json(value.value)}};
    } else if (value.quantity == Quantity::V ||
               value.quantity == Quantity::D2) {
      j[key] = value.value.value;
    } else {
      j[key] = io::ext_real_to_json(value.value);
    }
  }
  emit(j.dump(2), out_path, out);
  return 0;
}

int run_bound(const std::string& rho_spec, const std::string& rdm_spec,
              double eps, std::vector<double> deltas,
              const std::vector<std::string>& copies_raw, bool thermo,
              bool clock, const std::string& h_path, double beta,
              const std::string& format, const std::string& out_path,
              std::ostream& out) {
  const DensityMatrix rho = build_state(rho_spec);

  if (thermo || clock) {
    if (h_path.empty()) throw UsageError("--H is required for this scenario");
    const qcore::HermitianObservable h(
        io::matrix_from_json(io::load_json_file(h_path)), "energy");
    const std::vector<long long> copies =
        copies_raw.empty() ? std::vector<long long>{1}
                           : parse_copies_list(copies_raw);
    io::json j;
    if (thermo) {
      j["scenario"] = "thermo";
      j["beta"] = beta;
      const DensityMatrix gamma = bounds::gibbs_state(h, beta);
      j["D_rho_gamma"] =
          io::ext_real_to_json(entropy::relative_entropy(rho, gamma));
      io::json rows = io::json::array();
      for (long long n : copies) {
        rows.push_back(io::json{
            {"N", n},
            {"log2_m_bits", bounds::thermo_bound(rho, h, beta, eps, n)}});
      }
      j["bound"] = std::move(rows);
    } else {
      if (std::abs(rho.purity() - 1.0) > 1e-9) {
        throw DomainError("clock scenario needs a pure state");
      }
      // Recover the state vector from the rank-one density matrix.
      const qcore::EigenSystem es = qcore::hermitian_eig(rho.entries());
      const qcore::PureState psi{Vector(es.vectors.rightCols(1))};
      j["scenario"] = "clock";
      io::json rows = io::json::array();
      for (long long n : copies) {
        rows.push_back(
            io::json{{"N", n}, {"bits", bounds::clock_bound(psi, h, n)}});
      }
      j["bound"] = std::move(rows);
    }
    emit(j.dump(2), out_path, out);
    return 0;
  }

  const RdmChoice rdm = build_rdm(rdm_spec, rho.dim());
  if (deltas.empty()) {
    const double cap = std::min(eps, 1.0 - eps);
    deltas = {0.2 * cap, 0.4 * cap, 0.6 * cap, 0.8 * cap};
  }

  if (!copies_raw.empty() && format == "csv") {
    if (!rdm.twirl_channel) {
      throw DomainError("rate curves need a twirling resource destroying map");
    }
    const std::vector<long long> copies = parse_copies_list(copies_raw);
    std::ostringstream csv;
    bounds::write_rate_curve_csv(
        csv, bounds::rate_curve(rho, *rdm.twirl_channel, eps, deltas.front(),
                                copies));
    emit(csv.str(), out_path, out);
    return 0;
  }

  io::json j;
  if (rdm.twirl_channel) {
    const bounds::BoundReport report =
        bounds::sandwich_bounds(rho, *rdm.twirl_channel, eps, deltas);
    j["report"] = io::bound_report_to_json(report);
    if (!copies_raw.empty()) {
      io::json rates = io::json::array();
      for (long long n : parse_copies_list(copies_raw)) {
        io::json row =
            io::rate_to_json(bounds::asymptotic_rate(rho, *rdm.twirl_channel, eps, n));
        row["N"] = n;
        rates.push_back(std::move(row));
      }
      j["rate"] = std::move(rates);
    }
  } else {
    j["report"] = io::json{
        {"eps", eps},
        {"state_dim", rho.dim()},
        {"rdm", rdm_spec},
        {"log2_upper",
         io::ext_real_to_json(
             bounds::upper_bound_log_messages(rho, *rdm.plain_channel, eps))}};
  }
  emit(j.dump(2), out_path, out);
  return 0;
}

int run_simulate(const std::string& rho_spec, const std::string& rdm_spec,
                 const std::string& group_path, std::vector<int> messages,
                 int trials, std::uint64_t seed, double eps, bool achieve,
                 bool privacy, int threads, const std::string& format,
                 const std::string& out_path, std::ostream& out) {
  const DensityMatrix rho = build_state(rho_spec);
  const twirl::FiniteUnitaryGroup group =
      group_path.empty()
          ? encoding_group_for(rdm_spec, rho.dim())
          : io::group_from_json(io::load_json_file(group_path));
  if (group.dim() != rho.dim()) {
    throw UsageError("group dimension does not match the state");
  }

  if (achieve) {
    const codesim::AchievabilityReport report = codesim::find_achievable_log_m(
        rho, group, eps, trials, seed, {}, threads);
    emit(io::achievability_to_json(report).dump(2), out_path, out);
    return 0;
  }

  if (messages.empty()) messages = {group.order()};
  io::json results = io::json::array();
  std::ostringstream csv;
  csv << "M,mean_success,stderr\n" << std::setprecision(17);
  for (int m : messages) {
    codesim::SimulationResult result = codesim::monte_carlo_achievability(
        rho, group, m, trials, seed, eps, threads);
    if (privacy) {
      // Privacy of the twirl matching this group against the best codebook.
      const twirl::TwirlChannel g = twirl::finite_group_twirl(group);
      rng::Philox gen(seed, static_cast<std::uint64_t>(result.best_index));
      std::vector<int> assignment(m);
      for (int i = 0; i < m; ++i) {
        assignment[i] = 1 + static_cast<int>(gen.next_below(
                                static_cast<std::uint64_t>(group.order())));
      }
      io::json jr = io::simulation_to_json(result);
      jr["privacy_residual"] = codesim::check_privacy(
          rho, group, codesim::Codebook(assignment, group.order()), g);
      results.push_back(std::move(jr));
    } else {
      results.push_back(io::simulation_to_json(result));
    }
    csv << m << ',' << result.mean_success << ',' << result.stderr_mean << '\n';
  }
  if (format == "csv") {
    emit(csv.str(), out_path, out);
  } else {
    emit(results.size() == 1 ? results[0].dump(2) : results.dump(2), out_path,
         out);
  }
  return 0;
}

int run_schurweyl(const std::string& mode, int n, int d,
                  const std::string& out_path, std::ostream& out) {
  if (mode == "table" || mode == "maxtwirl") {
    long long dim = 1;
    for (int i = 0; i < std::min(n, 8); ++i) dim *= d;
    if (n < 1 || n > 5 || d < 1 || dim > 256) {
      throw UsageError("schurweyl supports n in 1..5 with d^n <= 256");
    }
  }
  if (mode == "demo3qubit") {
    emit(io::demo_to_json(schurweyl::three_qubit_demo()).dump(2), out_path, out);
    return 0;
  }
  if (mode == "table") {
    emit(io::schur_weyl_table_to_json(schurweyl::schur_weyl_table(n, d)).dump(2),
         out_path, out);
    return 0;
  }
  if (mode == "maxtwirl") {
    const schurweyl::MaximallyTwirledResult result =
        schurweyl::maximally_twirled_state(n, d);
    io::json j;
    j["found"] = result.state.has_value();
    if (result.state) {
      j["residual"] = result.residual;
      io::json re = io::json::array(), im = io::json::array();
      for (Eigen::Index i = 0; i < result.state->amplitudes().size(); ++i) {
        re.push_back(result.state->amplitudes()[i].real());
        im.push_back(result.state->amplitudes()[i].imag());
      }
      j["state"] = io::json{{"re", std::move(re)}, {"im", std::move(im)}};
    }
    emit(j.dump(2), out_path, out);
    return 0;
  }
  throw UsageError("unknown schurweyl mode '" + mode +
                   "'; expected demo3qubit, table or maxtwirl");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bounds and simulations for encoding classical messages into "
               "quantum resources"};
  app.require_subcommand(1);

  std::string rho_spec, sigma_spec = "dephased", rdm_spec = "dephasing";
  std::string out_path, format = "json", group_path, h_path;
  double eps = 0.1, beta = 1.0;
  std::vector<double> deltas;
  std::vector<std::string> copies_raw;
  std::vector<int> messages;
  int trials = 200, threads = 1;
  std::uint64_t seed = 1;
  bool thermo = false, clock = false, achieve = false, privacy = false;
  double ds_delta = 0.1;

  CLI::App* cmd_entropy =
      app.add_subcommand("entropy", "entropic quantities for a state pair");
  cmd_entropy->add_option("--rho", rho_spec)->required();
  cmd_entropy->add_option("--sigma", sigma_spec);
  cmd_entropy->add_option("--eps", eps);
  cmd_entropy->add_option("--delta", ds_delta);
  cmd_entropy->add_option("--out", out_path);

  CLI::App* cmd_bound =
      app.add_subcommand("bound", "message-count bounds and rate curves");
  cmd_bound->add_option("--rho", rho_spec)->required();
  cmd_bound->add_option("--rdm", rdm_spec);
  cmd_bound->add_option("--eps", eps);
  cmd_bound->add_option("--delta", deltas);
  cmd_bound->add_option("--N", copies_raw);
  cmd_bound->add_flag("--thermo", thermo);
  cmd_bound->add_flag("--clock", clock);
  cmd_bound->add_option("--H", h_path);
  cmd_bound->add_option("--beta", beta);
  cmd_bound->add_option("--format", format)
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_bound->add_option("--out", out_path);

  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "random-codebook achievability with PGM decoding");
  cmd_simulate->add_option("--rho", rho_spec)->required();
  cmd_simulate->add_option("--rdm", rdm_spec);
  cmd_simulate->add_option("--group", group_path);
  cmd_simulate->add_option("--M", messages);
  cmd_simulate->add_option("--trials", trials);
  cmd_simulate->add_option("--seed", seed);
  cmd_simulate->add_option("--eps", eps);
  cmd_simulate->add_flag("--achieve", achieve);
  cmd_simulate->add_flag("--check-privacy", privacy);
  cmd_simulate->add_option("--threads", threads);
  cmd_simulate->add_option("--format", format)
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_simulate->add_option("--out", out_path);

  CLI::App* cmd_schurweyl =
      app.add_subcommand("schurweyl", "Schur-Weyl tables and the demo");
  std::string mode;
  int sw_n = 3, sw_d = 2;
  cmd_schurweyl->add_option("mode", mode)->required();
  cmd_schurweyl->add_option("--n", sw_n);
  cmd_schurweyl->add_option("--d", sw_d);
  cmd_schurweyl->add_option("--out", out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (cmd_entropy->parsed()) {
      return run_entropy(rho_spec, sigma_spec, eps, ds_delta, out_path, out);
    }
    if (cmd_bound->parsed()) {
      return run_bound(rho_spec, rdm_spec, eps, deltas, copies_raw, thermo,
                       clock, h_path, beta, format, out_path, out);
    }
    if (cmd_simulate->parsed()) {
      return run_simulate(rho_spec, rdm_spec, group_path, messages, trials,
                          seed, eps, achieve, privacy, threads, format,
                          out_path, out);
    }
    if (cmd_schurweyl->parsed()) {
      return run_schurweyl(mode, sw_n, sw_d, out_path, out);
    }
    err << "usage error: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qres::cli
