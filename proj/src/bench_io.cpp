// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/bench_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include "phem/error.hpp"

namespace phem
{

namespace
{

double pick(const std::vector<double> &v, int i, const char *what)
{
  if (v.size() == 1)
  {
    return v[0];
  }
  if (static_cast<int>(v.size()) <= i)
  {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " needs 1 or n_masses values");
  }
  return v[static_cast<std::size_t>(i)];
}

// Tridiagonal chain matrix for elements c_i joining node i to node i-1 (node 0 to ground).
Matrix chain_matrix(const std::vector<double> &c, int n, const char *what)
{
  Matrix K = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
  {
    const double k = pick(c, i, what);
    if (!(k > 0.0))
    {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
    }
    K(i, i) += k;
    if (i > 0)
    {
      K(i - 1, i - 1) += k;
      K(i, i - 1) -= k;
      K(i - 1, i) -= k;
    }
  }
  return K;
}

// Whitespace-separated token reader that remembers where each token started.
class Tokenizer
{
public:
  Tokenizer(std::istream &is, std::string source) : is_(is), source_(std::move(source)) {}

  bool next(std::string &tok)
  {
    tok.clear();
    for (;;)
    {
      if (pos_ >= line_.size())
      {
        if (!std::getline(is_, line_))
        {
          return false;
        }
        ++line_no_;
        pos_ = 0;
        continue;
      }
      const char c = line_[pos_];
      if (c == '#')
      {
        pos_ = line_.size();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c)))
      {
        ++pos_;
        continue;
      }
      break;
    }
    tok_line_ = line_no_;
    tok_col_ = pos_ + 1;
    while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
           line_[pos_] != '#')
    {
      tok.push_back(line_[pos_++]);
    }
    return true;
  }

  std::string expect(const std::string &what)
  {
    std::string tok;
    if (!next(tok))
    {
      throw Error(ErrorKind::ParseError, source_ + ":" + std::to_string(line_no_ + 1) +
                                             ":1: unexpected end of file, expected " + what);
    }
    return tok;
  }

  [[noreturn]] void fail(const std::string &msg) const
  {
    throw Error(ErrorKind::ParseError, source_ + ":" + std::to_string(tok_line_) + ":" +
                                           std::to_string(tok_col_) + ": " + msg);
  }

  double number(const std::string &what)
  {
    const std::string tok = expect(what);
    double v = 0.0;
    const char *first = tok.data();
    const char *last = tok.data() + tok.size();
    if (*first == '+')
    {
      ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
    {
      fail("expected a finite number for " + what + ", got '" + tok + "'");
    }
    return v;
  }

  Eigen::Index count(const std::string &what)
  {
    const std::string tok = expect(what);
    long long v = -1;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0)
    {
      fail("expected a nonnegative integer for " + what + ", got '" + tok + "'");
    }
    return static_cast<Eigen::Index>(v);
  }

  Matrix block(const std::string &name, Eigen::Index rows, Eigen::Index cols)
  {
    const std::string tok = expect("block " + name);
    if (tok != name)
    {
      fail("expected block '" + name + "', got '" + tok + "'");
    }
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
      for (Eigen::Index j = 0; j < cols; ++j)
      {
        M(i, j) = number(name + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }
    return M;
  }

private:
  std::istream &is_;
  std::string source_;
  std::string line_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
  std::size_t tok_line_ = 0;
  std::size_t tok_col_ = 0;
};

void write_block(std::ostream &os, const char *name, const Matrix &M)
{
  os << name << "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i)
  {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
    {
      os << (j > 0 ? " " : "") << M(i, j);
    }
    os << "\n";
  }
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows)
{
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix M(r, c);
  Eigen::Index i = 0;
  for (const auto &row : rows)
  {
    Eigen::Index j = 0;
    for (double v : row)
    {
      M(i, j++) = v;
    }
    ++i;
  }
  return M;
}

ExtendedPhSystem from_lti(const LtiSystem &sys, const Matrix &Q)
{
  return ExtendedPhSystem(lti_to_ph(sys, Q));
}

}  // namespace

ExtendedPhSystem gen_msd(const MsdParams &params)
{
  const int n = params.n_masses;
  if (n < 1 || params.m < 1 || params.m > n)
  {
    throw Error(ErrorKind::InvalidArgument, "need n_masses >= 1 and 1 <= m <= n_masses");
  }
  const Matrix K = chain_matrix(params.springs, n, "spring constants");
  const Matrix Cd = chain_matrix(params.dampers, n, "damper constants");
  Vector minv(n);
  for (int i = 0; i < n; ++i)
  {
    const double mi = pick(params.masses, i, "masses");
    if (!(mi > 0.0))
    {
      throw Error(ErrorKind::InvalidArgument, "masses must be positive");
    }
    minv(i) = 1.0 / mi;
  }

  const Eigen::Index N = 2 * n;
  Matrix J = Matrix::Zero(N, N);
  J.topRightCorner(n, n).setIdentity();
  J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  Matrix R = Matrix::Zero(N, N);
  R.bottomRightCorner(n, n) = Cd;
  Matrix Q = Matrix::Zero(N, N);
  Q.topLeftCorner(n, n) = K;
  Q.bottomRightCorner(n, n) = minv.asDiagonal();
  Matrix G = Matrix::Zero(N, params.m);
  for (int i = 0; i < params.m; ++i)
  {
    G(n + i, i) = 1.0;
  }
  const Matrix Z = Matrix::Zero(N, params.m);
  const Matrix Zm = Matrix::Zero(params.m, params.m);
  return ExtendedPhSystem(PhSystem(J, R, Q, G, Z, Zm, Zm));
}

ExtendedPhSystem gen_rcl(const RclParams &p)
{
  if (p.n_cells < 1 || !(p.R_val > 0.0) || !(p.C_val > 0.0) || !(p.L_val > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "ladder needs n_cells >= 1 and positive R, C, L");
  }
  const Eigen::Index N = 3 * static_cast<Eigen::Index>(p.n_cells);
  Matrix J = Matrix::Zero(N, N);
  Matrix R = Matrix::Zero(N, N);
  Vector q(N);
  for (Eigen::Index c = 0; c < p.n_cells; ++c)
  {
    const Eigen::Index fa = 3 * c, fb = 3 * c + 1, qc = 3 * c + 2;
    q(fa) = 1.0 / p.L_val;
    q(fb) = 1.0 / p.L_val;
    q(qc) = 1.0 / p.C_val;
    R(fa, fa) = p.R_val;
    R(fb, fb) = p.R_val;
    for (Eigen::Index f : {fa, fb})
    {
      // branch voltage: v_{c-1} - v_c
      J(f, qc) = -1.0;
      J(qc, f) = 1.0;
      if (c > 0)
      {
        const Eigen::Index qprev = 3 * (c - 1) + 2;
        J(f, qprev) = 1.0;
        J(qprev, f) = -1.0;
      }
    }
  }
  Matrix G = Matrix::Zero(N, 1);
  G(0, 0) = 1.0;
  G(1, 0) = 1.0;
  const Matrix Z = Matrix::Zero(N, 1);
  const Matrix Zm = Matrix::Zero(1, 1);
  return ExtendedPhSystem(PhSystem(J, R, Matrix(q.asDiagonal()), G, Z, Zm, Zm));
}

ReferenceExample reference_example_from_string(const std::string &name)
{
  if (name == "ex4_1")
  {
    return ReferenceExample::Ex4_1;
  }
  if (name == "ex5_1")
  {
    return ReferenceExample::Ex5_1;
  }
  if (name == "ex5_5")
  {
    return ReferenceExample::Ex5_5;
  }
  if (name == "ex5_6")
  {
    return ReferenceExample::Ex5_6;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown example '" + name + "'");
}

std::string to_string(ReferenceExample which)
{
  switch (which)
  {
    case ReferenceExample::Ex4_1:
      return "ex4_1";
    case ReferenceExample::Ex5_1:
      return "ex5_1";
    case ReferenceExample::Ex5_5:
      return "ex5_5";
    case ReferenceExample::Ex5_6:
      return "ex5_6";
  }
  return "unknown";
}

ExampleData gen_reference_example(ReferenceExample which)
{
  ExampleData d;
  const Matrix zero1 = Matrix::Zero(1, 1);
  switch (which)
  {
    case ReferenceExample::Ex4_1:
    {
      PhSystem ph(mat({{0, -1}, {1, 0}}), mat({{1, -1}, {-1, 2}}), Matrix::Identity(2, 2),
                  mat({{1}, {0}}), Matrix::Zero(2, 1), zero1, zero1);
      d.fom_ph = ExtendedPhSystem(ph);
      d.fom_lti = ph_to_lti(ph);
      d.rom_lti = LtiSystem(mat({{-1}}), mat({{1}}), mat({{1}}), zero1);
      d.rom_ph = ExtendedPhSystem(
          PhSystem(zero1, mat({{1}}), mat({{1}}), mat({{1}}), zero1, zero1, zero1));
      break;
    }
    case ReferenceExample::Ex5_1:
    {
      PhSystem ph(mat({{0, 1}, {-1, 0}}), mat({{2, 0}, {0, 1}}), Matrix::Identity(2, 2),
                  mat({{6}, {0}}), Matrix::Zero(2, 1), mat({{1}}), zero1);
      d.fom_ph = ExtendedPhSystem(ph);
      d.fom_lti = ph_to_lti(ph);
      d.rom_lti = LtiSystem(mat({{-2}}), mat({{6}}), mat({{6}}), mat({{1}}));
      d.rom_ph = ExtendedPhSystem(
          PhSystem(zero1, mat({{2}}), mat({{1}}), mat({{6}}), zero1, mat({{1}}), zero1));
      break;
    }
    case ReferenceExample::Ex5_5:
    {
      d.fom_lti = LtiSystem(mat({{-2, -4}, {-4, -9}}), mat({{4}, {4}}), mat({{4, 4}}),
                            mat({{1}}));
      d.fom_ph = from_lti(d.fom_lti, mat({{0.5, 0}, {0, 0.25}}));
      d.rom_lti = LtiSystem(mat({{-2}}), mat({{4}}), mat({{4}}), mat({{1}}));
      d.rom_ph = from_lti(*d.rom_lti, mat({{0.5}}));
      break;
    }
    case ReferenceExample::Ex5_6:
    {
      d.fom_lti = LtiSystem(mat({{-1, -4.5}, {-4.5, -27}}), mat({{4}, {4}}), mat({{4, 4}}),
                            mat({{1.0 / 3.0}}));
      d.fom_ph = from_lti(d.fom_lti, mat({{0.75, 0}, {0, 0.25}}));
      d.rom_lti = LtiSystem(mat({{-1}}), mat({{4}}), mat({{4}}), mat({{1.0 / 3.0}}));
      d.rom_ph = from_lti(*d.rom_lti, mat({{0.75}}));
      break;
    }
  }
  return d;
}

SystemData parse_system(std::istream &is, const std::string &source_name)
{
  Tokenizer tk(is, source_name);
  const std::string tag = tk.expect("format tag");
  if (tag == "PHMX1")
  {
    const Eigen::Index n = tk.count("n");
    const Eigen::Index m = tk.count("m");
    Matrix J = tk.block("J", n, n);
    Matrix R = tk.block("R", n, n);
    Matrix Q = tk.block("Q", n, n);
    Matrix G = tk.block("G", n, m);
    Matrix P = tk.block("P", n, m);
    Matrix S = tk.block("S", m, m);
    Matrix N = tk.block("N", m, m);
    std::string extra;
    if (tk.next(extra))
    {
      tk.fail("unexpected trailing content '" + extra + "'");
    }
    return ExtendedPhSystem(PhSystem(std::move(J), std::move(R), std::move(Q), std::move(G),
                                     std::move(P), std::move(S), std::move(N)));
  }
  if (tag == "LTIX1")
  {
    const Eigen::Index n = tk.count("n");
    const Eigen::Index m = tk.count("m");
    const Eigen::Index p = tk.count("p");
    Matrix A = tk.block("A", n, n);
    Matrix B = tk.block("B", n, m);
    Matrix C = tk.block("C", p, n);
    Matrix D = tk.block("D", p, m);
    std::string extra;
    if (tk.next(extra))
    {
      tk.fail("unexpected trailing content '" + extra + "'");
    }
    return LtiSystem(std::move(A), std::move(B), std::move(C), std::move(D));
  }
  tk.fail("unknown format tag '" + tag + "', expected PHMX1 or LTIX1");
}

SystemData read_system(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  }
  return parse_system(is, path);
}

void write_system(const ExtendedPhSystem &sys, std::ostream &os)
{
  const PhSystem &ph = sys.ph;
  os << std::setprecision(17);
  os << "PHMX1 " << ph.n() << " " << ph.m() << "\n";
  write_block(os, "J", ph.J);
  write_block(os, "R", ph.R);
  write_block(os, "Q", ph.Q);
  write_block(os, "G", ph.G);
  write_block(os, "P", ph.P);
  write_block(os, "S", ph.S);
  write_block(os, "N", ph.N);
}

void write_system(const LtiSystem &sys, std::ostream &os)
{
  os << std::setprecision(17);
  os << "LTIX1 " << sys.n() << " " << sys.m() << " " << sys.p() << "\n";
  write_block(os, "A", sys.A);
  write_block(os, "B", sys.B);
  write_block(os, "C", sys.C);
  write_block(os, "D", sys.D);
}

void write_system(const SystemData &sys, const std::string &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  }
  std::visit([&](const auto &s) { write_system(s, os); }, sys);
  if (!os)
  {
    throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
  }
}

LtiSystem as_lti(const SystemData &sys)
{
  if (const auto *ph = std::get_if<ExtendedPhSystem>(&sys))
  {
    return ph->io();
  }
  return std::get<LtiSystem>(sys);
}

const char *const kResultsCsvHeader = "r,h2_io_abs,h2_io_rel,h2_ham_abs,h2_ham_rel,wall_time_s,method";

void write_results_csv(const std::vector<ResultRow> &rows, std::ostream &os)
{
  os << kResultsCsvHeader << "\n";
  os << std::setprecision(17);
  for (const ResultRow &row : rows)
  {
    os << row.r << ',' << row.h2_io_abs << ',' << row.h2_io_rel << ',' << row.h2_ham_abs << ','
       << row.h2_ham_rel << ',' << row.wall_time_s << ',' << row.method << "\n";
  }
}

void write_results_csv(const std::vector<ResultRow> &rows, const std::string &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  }
  write_results_csv(rows, os);
  if (!os)
  {
    throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
  }
}

std::vector<ResultRow> read_results_csv(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  }
  std::string line;
  if (!std::getline(is, line) || line != kResultsCsvHeader)
  {
    throw Error(ErrorKind::ParseError, path + ":1:1: missing or unexpected CSV header");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line))
  {
    ++line_no;
    if (line.empty())
    {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
      cells.push_back(cell);
    }
    if (cells.size() != 7)
    {
      throw Error(ErrorKind::ParseError,
                  path + ":" + std::to_string(line_no) + ":1: expected 7 columns");
    }
    try
    {
      ResultRow row;
      row.r = std::stoi(cells[0]);
      row.h2_io_abs = std::stod(cells[1]);
      row.h2_io_rel = std::stod(cells[2]);
      row.h2_ham_abs = std::stod(cells[3]);
      row.h2_ham_rel = std::stod(cells[4]);
      row.wall_time_s = std::stod(cells[5]);
      row.method = cells[6];
      rows.push_back(row);
    }
    catch (const std::exception &)
    {
      throw Error(ErrorKind::ParseError,
                  path + ":" + std::to_string(line_no) + ":1: malformed number");
    }
  }
  return rows;
}

}  // namespace phem
