// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>
#include <CLI11.hpp>
#include "phem/bench_io.hpp"
#include "phem/energymatch.hpp"
#include "phem/error.hpp"
#include "phem/gramians.hpp"
#include "phem/kyp.hpp"
#include "phem/reduction.hpp"
#include "phem/structure.hpp"

namespace phem
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_matrix(const Matrix &M)
{
  std::ostringstream os;
  os << std::setprecision(17) << "[";
  for (Eigen::Index i = 0; i < M.rows(); ++i)
  {
    os << (i > 0 ? "; " : "");
    for (Eigen::Index j = 0; j < M.cols(); ++j)
    {
      os << (j > 0 ? " " : "") << M(i, j);
    }
  }
  os << "]";
  return os.str();
}

// Flat key=value record written next to every output file.
class Manifest
{
public:
  explicit Manifest(std::string command) { add("command", std::move(command)); }

  void add(const std::string &key, const std::string &value) { kv_.emplace_back(key, value); }
  void add(const std::string &key, double value) { add(key, fmt(value)); }
  void add(const std::string &key, int value) { add(key, std::to_string(value)); }

  void write(const std::string &output_path, Clock::time_point t0)
  {
    add("tool_version", std::string(kToolVersion));
    add("wall_time_s", seconds_since(t0));
    const std::string path = output_path + ".manifest";
    std::ofstream os(path);
    if (!os)
    {
      throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    }
    for (const auto &[k, v] : kv_)
    {
      os << k << "=" << v << "\n";
    }
  }

private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

int exit_code(const Error &e)
{
  switch (e.kind())
  {
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
    case ErrorKind::InvalidArgument:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

ExtendedPhSystem require_ph(const SystemData &data, const std::string &path)
{
  if (const auto *ph = std::get_if<ExtendedPhSystem>(&data))
  {
    return *ph;
  }
  throw Error(ErrorKind::InvalidArgument, "'" + path + "' holds a state-space model (LTIX1); "
                                          "this command needs a pH model (PHMX1)");
}

// pH form of a file's content; state-space models are factorized with their minimal
// Riccati solution.
ExtendedPhSystem to_ph(const SystemData &data)
{
  if (const auto *ph = std::get_if<ExtendedPhSystem>(&data))
  {
    return *ph;
  }
  const LtiSystem &lti = std::get<LtiSystem>(data);
  const PassivityReport rep = is_passive(lti);
  if (!rep.passive)
  {
    throw Error(ErrorKind::NotFeasible, "state-space model is not passive: " + rep.diagnostic);
  }
  const LtiSystem work = rep.certificate.feedthrough_eps > 0.0
                             ? with_feedthrough(lti, rep.certificate.feedthrough_eps)
                             : lti;
  return ExtendedPhSystem(lti_to_ph(work, rep.certificate.X));
}

std::vector<double> parse_doubles(const std::string &text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ','))
  {
    try
    {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size())
      {
        throw std::invalid_argument(cell);
      }
    }
    catch (const std::exception &)
    {
      throw Error(ErrorKind::InvalidArgument, "not a number: '" + cell + "'");
    }
  }
  return out;
}

// "2,4,6" or "2:20:2"
std::vector<int> parse_orders(const std::string &text)
{
  std::vector<int> out;
  if (text.find(':') != std::string::npos)
  {
    const std::vector<double> v = parse_doubles([&] {
      std::string t = text;
      for (char &c : t)
      {
        if (c == ':')
        {
          c = ',';
        }
      }
      return t;
    }());
    if (v.size() != 3 || v[2] <= 0)
    {
      throw Error(ErrorKind::InvalidArgument, "order range must be start:stop:step");
    }
    for (int r = static_cast<int>(v[0]); r <= static_cast<int>(v[1]); r += static_cast<int>(v[2]))
    {
      out.push_back(r);
    }
    return out;
  }
  for (double v : parse_doubles(text))
  {
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> split(const std::string &text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ','))
  {
    out.push_back(cell);
  }
  return out;
}

// Regularizes a singular symmetric feedthrough; returns the eps used (0 if none).
double regularize_feedthrough(ExtendedPhSystem &sys)
{
  if (sys.m() == 0)
  {
    return 0.0;
  }
  const double scale = std::max(1.0, sys.ph.S.cwiseAbs().maxCoeff());
  if (min_eigenvalue(2.0 * sys.ph.S) < 1e-12 * scale)
  {
    sys.ph = with_feedthrough(sys.ph, kArtificialFeedthrough);
    return kArtificialFeedthrough;
  }
  return 0.0;
}

std::vector<std::complex<double>> probe_points()
{
  std::vector<std::complex<double>> s;
  for (int k = 0; k < 20; ++k)
  {
    s.emplace_back(0.0, std::pow(10.0, -3.0 + 6.0 * k / 19.0));
  }
  return s;
}

// ---- commands ----

int cmd_validate(const std::string &path, double tol, std::ostream &out)
{
  const SystemData data = read_system(path);
  const ExtendedPhSystem sys = require_ph(data, path);
  const ValidationReport rep = validate_ph(sys.ph, tol);
  out << rep.to_string() << "\n";
  return rep.ok() ? kExitOk : kExitDomain;
}

int cmd_minreal(const std::string &path, double tol, const std::string &out_path,
                std::ostream &out)
{
  const auto t0 = Clock::now();
  const ExtendedPhSystem sys = require_ph(read_system(path), path);
  const DecompositionReport rep = kalman_full_form(sys, tol);
  const double dist = h2_dist_extended(sys, rep.subsystem);
  const double norm = h2_norm_extended(sys);
  const double rel = norm > 0.0 ? dist / norm : dist;

  write_system(rep.subsystem, out_path);
  Manifest mf("minreal");
  mf.add("input", path);
  mf.add("output", out_path);
  mf.add("tol", tol);
  mf.add("n", static_cast<int>(sys.n()));
  mf.add("order", static_cast<int>(rep.subsystem.n()));
  mf.add("n_co", rep.dims[kCo]);
  mf.add("n_nco", rep.dims[kNcO]);
  mf.add("n_cno", rep.dims[kCNo]);
  mf.add("n_ncno", rep.dims[kNcNo]);
  mf.add("h2_dist_extended_abs", dist);
  mf.add("h2_dist_extended_rel", rel);
  mf.write(out_path, t0);

  out << "order " << rep.subsystem.n() << " of " << sys.n() << "\n";
  out << "dims co=" << rep.dims[kCo] << " nc_o=" << rep.dims[kNcO]
      << " c_no=" << rep.dims[kCNo] << " nc_no=" << rep.dims[kNcNo] << "\n";
  out << "h2_dist_extended abs=" << fmt(dist) << " rel=" << fmt(rel) << "\n";
  return kExitOk;
}

struct ReduceOptions
{
  int r = 1;
  std::string method = "prbt";
  int max_iter = 100;
  double shift_tol = 1e-6;
  std::uint64_t seed = 1;
};

RomResult run_reducer(const ExtendedPhSystem &fom, const ReduceOptions &o)
{
  const RomMethod method = rom_method_from_string(o.method);
  if (method == RomMethod::Prbt)
  {
    return prbt(fom.io(), o.r);
  }
  PhIrkaOptions po;
  po.max_iter = o.max_iter;
  po.shift_tol = o.shift_tol;
  po.seed = o.seed;
  return phirka(fom, o.r, po);
}

int cmd_reduce(const std::string &path, const ReduceOptions &o, const std::string &out_path,
               std::ostream &out)
{
  const auto t0 = Clock::now();
  const ExtendedPhSystem fom =
      remove_unobservable_hamiltonian(to_ph(read_system(path)), kDefaultStructureTol);
  const RomResult res = run_reducer(fom, o);
  write_system(res.rom_ph, out_path);

  Manifest mf("reduce");
  mf.add("input", path);
  mf.add("output", out_path);
  mf.add("method", o.method);
  mf.add("r", o.r);
  mf.add("seed", std::to_string(o.seed));
  mf.add("max_iter", o.max_iter);
  mf.add("shift_tol", o.shift_tol);
  mf.add("feedthrough_eps", res.feedthrough_eps);
  if (res.iterations)
  {
    mf.add("iterations", *res.iterations);
  }
  mf.add("converged", std::string(res.converged ? "true" : "false"));
  mf.write(out_path, t0);

  const ValidationReport vr = validate_ph(res.rom_ph.ph);
  out << "method " << o.method << " order " << o.r << "\n";
  if (res.iterations)
  {
    out << "iterations " << *res.iterations << (res.converged ? "" : " (not converged)") << "\n";
  }
  if (res.feedthrough_eps > 0.0)
  {
    out << "artificial feedthrough " << fmt(res.feedthrough_eps) << "\n";
  }
  out << "pH check: " << vr.to_string() << "\n";
  return vr.ok() ? kExitOk : kExitDomain;
}

int cmd_energy_match(const std::string &fom_path, const std::string &rom_path,
                     const std::string &out_path, const std::string &alphas,
                     const std::string &sdp_path, std::ostream &out, std::ostream &err)
{
  const auto t0 = Clock::now();
  const ExtendedPhSystem fom = require_ph(read_system(fom_path), fom_path);
  const SystemData rom_data = read_system(rom_path);
  const LtiSystem rom = as_lti(rom_data);

  EnergyMatchConfig cfg;
  if (!alphas.empty())
  {
    cfg.alpha_schedule = parse_doubles(alphas);
  }
  const EnergyMatchResult res = energy_match(fom, rom, cfg);
  const EnergyMatchProblem prob = build_problem(fom, res.rom_lti);
  if (!sdp_path.empty())
  {
    export_sdp(prob, sdp_path);
  }

  double cost_before = res.initial_cost;
  std::string before_label = "best initialization candidate";
  if (const auto *ph = std::get_if<ExtendedPhSystem>(&rom_data))
  {
    cost_before = cost(prob, ph->ph.Q);
    before_label = "input Hamiltonian";
  }

  // The state-space model is carried over unchanged; its pH factorization reproduces it.
  bool io_ok = true;
  const LtiSystem refactored = ph_to_lti(res.rom_ph.ph);
  for (const auto &s : probe_points())
  {
    const ComplexMatrix h0 = evaluate_transfer(rom, s);
    const ComplexMatrix h1 = evaluate_transfer(res.rom_lti, s);
    const ComplexMatrix h2 = evaluate_transfer(refactored, s);
    if (res.feedthrough_eps == 0.0 && (h0.array() != h1.array()).any())
    {
      io_ok = false;
    }
    if ((h1 - h2).norm() > 1e-8 * std::max(1.0, h1.norm()))
    {
      io_ok = false;
    }
  }
  if (!io_ok)
  {
    err << "error: transfer function changed during energy matching\n";
    return kExitDomain;
  }

  write_system(res.rom_ph, out_path);
  Manifest mf("energy-match");
  mf.add("fom", fom_path);
  mf.add("rom", rom_path);
  mf.add("output", out_path);
  std::string sched;
  for (std::size_t i = 0; i < cfg.alpha_schedule.size(); ++i)
  {
    sched += (i > 0 ? "," : "") + fmt(cfg.alpha_schedule[i]);
  }
  mf.add("alpha_schedule", sched);
  mf.add("bfgs_grad_tol", cfg.bfgs_grad_tol);
  mf.add("bfgs_max_iter", cfg.bfgs_max_iter);
  mf.add("feasibility_tol", cfg.feasibility_tol);
  mf.add("feedthrough_eps", res.feedthrough_eps);
  mf.add("cost_before", cost_before);
  mf.add("cost_after", res.cost);
  mf.add("converged", std::string(res.converged ? "true" : "false"));
  if (!sdp_path.empty())
  {
    mf.add("sdp_export", sdp_path);
  }
  mf.write(out_path, t0);

  out << "Q_opt " << fmt_matrix(res.Q_opt) << "\n";
  out << "cost before (" << before_label << ") " << fmt(cost_before) << "\n";
  out << "cost after " << fmt(res.cost) << "\n";
  out << "hamiltonian H2 error before " << fmt(std::sqrt(std::max(cost_before, 0.0)))
      << " after " << fmt(std::sqrt(std::max(res.cost, 0.0))) << "\n";
  out << "improvement " << fmt(cost_before - res.cost) << "\n";
  if (res.feedthrough_eps > 0.0)
  {
    out << "artificial feedthrough " << fmt(res.feedthrough_eps) << "\n";
  }
  return kExitOk;
}

int cmd_h2(const std::string &fom_path, const std::string &rom_path, const std::string &which,
           std::ostream &out)
{
  const SystemData fd = read_system(fom_path);
  const SystemData rd = read_system(rom_path);
  double abs = 0.0, norm = 0.0;
  if (which == "io")
  {
    const LtiSystem f = as_lti(fd);
    abs = h2_dist_lti(f, as_lti(rd));
    norm = h2_norm_strictly_proper(f);
  }
  else if (which == "ham")
  {
    const ExtendedPhSystem f =
        remove_unobservable_hamiltonian(require_ph(fd, fom_path), kDefaultStructureTol);
    const ExtendedPhSystem r =
        remove_unobservable_hamiltonian(require_ph(rd, rom_path), kDefaultStructureTol);
    abs = h2_dist_ltiqo(f.ham(), r.ham());
    norm = h2_norm_ltiqo(f.ham());
  }
  else if (which == "extended")
  {
    const ExtendedPhSystem f = require_ph(fd, fom_path);
    abs = h2_dist_extended(f, require_ph(rd, rom_path));
    norm = h2_norm_extended(f);
  }
  else
  {
    throw Error(ErrorKind::InvalidArgument, "--which must be io, ham or extended");
  }
  out << "abs " << fmt(abs) << "\n";
  out << "rel " << fmt(norm > 0.0 ? abs / norm : abs) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string &path, const std::string &orders_text,
              const std::string &methods_text, const std::string &out_path,
              const ReduceOptions &base, std::ostream &out)
{
  const auto t0 = Clock::now();
  ExtendedPhSystem fom =
      remove_unobservable_hamiltonian(to_ph(read_system(path)), kDefaultStructureTol);
  const double eps = regularize_feedthrough(fom);
  const LtiSystem fom_io = fom.io();
  const LtiqoSystem fom_ham = fom.ham();
  const double io_norm = h2_norm_strictly_proper(fom_io);
  const double ham_norm = h2_norm_ltiqo(fom_ham);
  const std::vector<int> orders = parse_orders(orders_text);
  const std::vector<std::string> methods = split(methods_text);

  std::vector<ResultRow> rows;
  for (const std::string &method : methods)
  {
    for (int r : orders)
    {
      const auto t1 = Clock::now();
      ReduceOptions o = base;
      o.r = r;
      o.method = method;
      const RomResult rr = run_reducer(fom, o);
      const double io_abs = h2_dist_lti(fom_io, rr.rom_lti);
      const double ham_pre = h2_dist_ltiqo(fom_ham, rr.rom_ph.ham());
      const double t_reduce = seconds_since(t1);

      const auto t2 = Clock::now();
      const EnergyMatchResult em = energy_match(fom, rr.rom_lti);
      const double io_post = h2_dist_lti(fom_io, em.rom_lti);
      const double ham_post = h2_dist_ltiqo(fom_ham, em.rom_ph.ham());
      const double t_match = seconds_since(t2);

      rows.push_back({r, io_abs, io_abs / io_norm, ham_pre, ham_pre / ham_norm, t_reduce,
                      method});
      rows.push_back({r, io_post, io_post / io_norm, ham_post, ham_post / ham_norm,
                      t_reduce + t_match, method + "-em"});
      out << method << " r=" << r << " io=" << fmt(io_abs / io_norm)
          << " ham=" << fmt(ham_pre / ham_norm) << " ham_em=" << fmt(ham_post / ham_norm)
          << "\n";
    }
  }
  write_results_csv(rows, out_path);

  Manifest mf("sweep");
  mf.add("input", path);
  mf.add("output", out_path);
  mf.add("orders", orders_text);
  mf.add("methods", methods_text);
  mf.add("seed", std::to_string(base.seed));
  mf.add("max_iter", base.max_iter);
  mf.add("shift_tol", base.shift_tol);
  mf.add("feedthrough_eps", eps);
  mf.write(out_path, t0);
  return kExitOk;
}

struct GenOptions
{
  std::string family;
  MsdParams msd;
  std::string masses = "4", springs = "4", dampers = "1";
  RclParams rcl;
  std::string example = "ex5_1";
  std::string part = "fom";
  std::string format = "ph";
};

int cmd_gen(GenOptions g, const std::string &out_path, std::ostream &out)
{
  const auto t0 = Clock::now();
  Manifest mf("gen");
  mf.add("family", g.family);
  SystemData data;
  if (g.family == "msd")
  {
    g.msd.masses = parse_doubles(g.masses);
    g.msd.springs = parse_doubles(g.springs);
    g.msd.dampers = parse_doubles(g.dampers);
    data = gen_msd(g.msd);
    mf.add("n_masses", g.msd.n_masses);
    mf.add("m", g.msd.m);
    mf.add("masses", g.masses);
    mf.add("springs", g.springs);
    mf.add("dampers", g.dampers);
  }
  else if (g.family == "rcl")
  {
    data = gen_rcl(g.rcl);
    mf.add("n_cells", g.rcl.n_cells);
    mf.add("R", g.rcl.R_val);
    mf.add("C", g.rcl.C_val);
    mf.add("L", g.rcl.L_val);
  }
  else if (g.family == "example")
  {
    const ExampleData d = gen_reference_example(reference_example_from_string(g.example));
    if (g.part == "fom")
    {
      data = d.fom_ph;
    }
    else if (g.part == "rom")
    {
      if (!d.rom_ph)
      {
        throw Error(ErrorKind::InvalidArgument, "example has no reduced model");
      }
      data = *d.rom_ph;
    }
    else
    {
      throw Error(ErrorKind::InvalidArgument, "--part must be fom or rom");
    }
    mf.add("example", g.example);
    mf.add("part", g.part);
  }
  else
  {
    throw Error(ErrorKind::InvalidArgument, "family must be msd, rcl or example");
  }
  if (g.format == "lti")
  {
    data = as_lti(data);
  }
  else if (g.format != "ph")
  {
    throw Error(ErrorKind::InvalidArgument, "--format must be ph or lti");
  }
  write_system(data, out_path);
  mf.add("format", g.format);
  mf.add("output", out_path);
  mf.write(out_path, t0);
  const LtiSystem lti = as_lti(data);
  out << "wrote " << g.family << " system with n=" << lti.n() << " m=" << lti.m() << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string &path, const std::string &preset, double tf, double dt,
                 const std::string &out_path, std::ostream &out)
{
  const auto t0 = Clock::now();
  if (!(tf >= 0.0) || !(dt > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "need tf >= 0 and dt > 0");
  }
  const ExtendedPhSystem sys = to_ph(read_system(path));
  const Eigen::Index m = sys.m();

  // samples every dt/2 so that the midpoint evaluations hit sample points
  const auto K = static_cast<Eigen::Index>(std::llround(2.0 * tf / dt));
  Signal u;
  u.values.resize(m, K + 1);
  for (Eigen::Index k = 0; k <= K; ++k)
  {
    const double t = 0.5 * dt * static_cast<double>(k);
    u.times.push_back(t);
    for (Eigen::Index i = 0; i < m; ++i)
    {
      if (preset == "zero")
      {
        u.values(i, k) = 0.0;
      }
      else if (preset == "step")
      {
        u.values(i, k) = 1.0;
      }
      else if (preset == "sincos")
      {
        u.values(i, k) = i % 2 == 0 ? std::sin(t) : std::cos(t);
      }
      else
      {
        throw Error(ErrorKind::InvalidArgument, "--input must be zero, step or sincos");
      }
    }
  }
  if (K == 0)
  {
    u.times = {0.0};
  }
  const Trajectory traj = simulate(sys, u, Vector::Zero(sys.n()), dt);

  std::ofstream os(out_path);
  if (!os)
  {
    throw Error(ErrorKind::IoError, "cannot open '" + out_path + "' for writing");
  }
  os << "t";
  for (Eigen::Index i = 0; i < traj.y.rows(); ++i)
  {
    os << ",y" << i + 1;
  }
  os << ",yH\n" << std::setprecision(17);
  for (std::size_t k = 0; k < traj.t.size(); ++k)
  {
    os << traj.t[k];
    for (Eigen::Index i = 0; i < traj.y.rows(); ++i)
    {
      os << ',' << traj.y(i, static_cast<Eigen::Index>(k));
    }
    os << ',' << traj.yH(static_cast<Eigen::Index>(k)) << "\n";
  }
  os.close();

  Manifest mf("simulate");
  mf.add("input", path);
  mf.add("output", out_path);
  mf.add("preset", preset);
  mf.add("tf", tf);
  mf.add("dt", dt);
  mf.write(out_path, t0);
  out << "wrote " << traj.t.size() << " samples\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Structure-preserving model reduction for port-Hamiltonian systems"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string path, path2, out_path;
  double tol = kDefaultValidationTol;

  auto *validate = app.add_subcommand("validate", "Check the pH conditions of a PHMX1 file");
  validate->add_option("path", path, "system file")->required();
  validate->add_option("--tol", tol, "relative tolerance")->capture_default_str();

  double mr_tol = kDefaultStructureTol;
  auto *minreal = app.add_subcommand("minreal", "Structure-preserving minimal realization");
  minreal->add_option("path", path, "PHMX1 file")->required();
  minreal->add_option("--tol", mr_tol, "relative rank tolerance")->capture_default_str();
  minreal->add_option("-o,--output", out_path, "output PHMX1 file")->required();

  ReduceOptions ro;
  auto *reduce = app.add_subcommand("reduce", "Passivity-preserving reduction");
  reduce->add_option("path", path, "system file")->required();
  reduce->add_option("-r,--order", ro.r, "reduced order")->required();
  reduce->add_option("--method", ro.method, "prbt or phirka")->capture_default_str();
  reduce->add_option("--max-iter", ro.max_iter, "pH-IRKA iteration limit")->capture_default_str();
  reduce->add_option("--shift-tol", ro.shift_tol, "pH-IRKA shift tolerance")
      ->capture_default_str();
  reduce->add_option("--seed", ro.seed, "seed of the initial tangents")->capture_default_str();
  reduce->add_option("-o,--output", out_path, "output PHMX1 file")->required();

  std::string alphas, sdp_path;
  auto *em = app.add_subcommand("energy-match", "Optimize the reduced Hamiltonian");
  em->add_option("fom", path, "full-order PHMX1 file")->required();
  em->add_option("rom", path2, "reduced model file")->required();
  em->add_option("-o,--output", out_path, "output PHMX1 file")->required();
  em->add_option("--alpha-schedule", alphas, "comma-separated decreasing barrier weights");
  em->add_option("--sdp-export", sdp_path, "write the problem as SDP data");

  std::string which = "extended";
  auto *h2 = app.add_subcommand("h2", "H2 distance between two models");
  h2->add_option("fom", path, "full-order model file")->required();
  h2->add_option("rom", path2, "reduced model file")->required();
  h2->add_option("--which", which, "io, ham or extended")->capture_default_str();

  std::string orders = "2:20:2", methods = "prbt,phirka";
  ReduceOptions so;
  auto *sweep = app.add_subcommand("sweep", "Reduce, match and measure over several orders");
  sweep->add_option("path", path, "full-order model file")->required();
  sweep->add_option("--orders", orders, "list a,b,c or range start:stop:step")
      ->capture_default_str();
  sweep->add_option("--methods", methods, "comma-separated reducers")->capture_default_str();
  sweep->add_option("--max-iter", so.max_iter, "pH-IRKA iteration limit")->capture_default_str();
  sweep->add_option("--shift-tol", so.shift_tol, "pH-IRKA shift tolerance")
      ->capture_default_str();
  sweep->add_option("--seed", so.seed, "seed of the initial tangents")->capture_default_str();
  sweep->add_option("-o,--output", out_path, "output CSV file")->required();

  GenOptions go;
  auto *gen = app.add_subcommand("gen", "Generate a benchmark system");
  gen->add_option("family", go.family, "msd, rcl or example")->required();
  gen->add_option("--n-masses", go.msd.n_masses)->capture_default_str();
  gen->add_option("--m", go.msd.m, "number of inputs (msd)")->capture_default_str();
  gen->add_option("--masses", go.masses, "one value or a comma-separated list")
      ->capture_default_str();
  gen->add_option("--springs", go.springs)->capture_default_str();
  gen->add_option("--dampers", go.dampers)->capture_default_str();
  gen->add_option("--n-cells", go.rcl.n_cells)->capture_default_str();
  gen->add_option("--R", go.rcl.R_val)->capture_default_str();
  gen->add_option("--C", go.rcl.C_val)->capture_default_str();
  gen->add_option("--L", go.rcl.L_val)->capture_default_str();
  gen->add_option("--example", go.example, "ex4_1, ex5_1, ex5_5 or ex5_6")
      ->capture_default_str();
  gen->add_option("--part", go.part, "fom or rom (example)")->capture_default_str();
  gen->add_option("--format", go.format, "ph or lti")->capture_default_str();
  gen->add_option("-o,--output", out_path, "output file")->required();

  std::string preset = "zero";
  double tf = 10.0, dt = 0.01;
  auto *sim = app.add_subcommand("simulate", "Time simulation with implicit midpoint");
  sim->add_option("path", path, "system file")->required();
  sim->add_option("--input", preset, "zero, step or sincos")->capture_default_str();
  sim->add_option("--tf", tf, "final time")->capture_default_str();
  sim->add_option("--dt", dt, "time step")->capture_default_str();
  sim->add_option("-o,--output", out_path, "output CSV file")->required();

  std::vector<const char *> argv;
  for (const std::string &a : args)
  {
    argv.push_back(a.c_str());
  }
  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    if (*validate)
    {
      return cmd_validate(path, tol, out);
    }
    if (*minreal)
    {
      return cmd_minreal(path, mr_tol, out_path, out);
    }
    if (*reduce)
    {
      return cmd_reduce(path, ro, out_path, out);
    }
    if (*em)
    {
      return cmd_energy_match(path, path2, out_path, alphas, sdp_path, out, err);
    }
    if (*h2)
    {
      return cmd_h2(path, path2, which, out);
    }
    if (*sweep)
    {
      return cmd_sweep(path, orders, methods, out_path, so, out);
    }
    if (*gen)
    {
      return cmd_gen(go, out_path, out);
    }
    if (*sim)
    {
      return cmd_simulate(path, preset, tf, dt, out_path, out);
    }
  }
  catch (const Error &e)
  {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace phem
