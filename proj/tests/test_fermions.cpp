#include <doctest.h>

#include "lattherm/fermions.hpp"
#include "lattherm/quench.hpp"
#include "oracles.hpp"

using namespace lattherm;

namespace {

const SiteSpace kQubit(2);

// Explicit Jordan-Wigner ladder operators on an L-site chain, built from raw
// kron strings. Everything in the suite is checked against these matrices.
CMatrix annihilator(int x, int sites) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CMatrix acc = CMatrix::Identity(1, 1);
  for (int y = 0; y < sites; ++y) {
    if (y < x)
      acc = kron(acc, pauli_z());
    else if (y == x)
      acc = kron(acc, a);
    else
      acc = kron(acc, CMatrix::Identity(2, 2));
  }
  return acc;
}

CMatrix car_hamiltonian(const FermionInteraction& f, int sites) {
  const long dim = 1L << sites;
  CMatrix h = CMatrix::Zero(dim, dim);
  std::vector<CMatrix> ops;
  for (int x = 0; x < sites; ++x) ops.push_back(annihilator(x, sites));
  for (int x = 0; x < sites; ++x) {
    h -= f.mu * (ops[x].adjoint() * ops[x]);
    for (std::size_t idx = 0; idx < f.hopping.size(); ++idx) {
      const int k = static_cast<int>(idx) + 1;
      if (x + k < sites && f.hopping[idx] != 0.0)
        h += f.hopping[idx] *
             (ops[x].adjoint() * ops[x + k] + ops[x + k].adjoint() * ops[x]);
    }
    for (std::size_t idx = 0; idx < f.density.size(); ++idx) {
      const int k = static_cast<int>(idx) + 1;
      if (x + k < sites && f.density[idx] != 0.0)
        h += f.density[idx] * (ops[x].adjoint() * ops[x]) *
             (ops[x + k].adjoint() * ops[x + k]);
    }
    for (std::size_t idx = 0; idx < f.pairing.size(); ++idx) {
      const int k = static_cast<int>(idx) + 1;
      if (x + k < sites && f.pairing[idx] != 0.0)
        h += f.pairing[idx] *
             (ops[x].adjoint() * ops[x + k].adjoint() + ops[x + k] * ops[x]);
    }
  }
  return h;
}

}  // namespace

TEST_SUITE("fermions") {

TEST_CASE("anticommutation relations") {
  const int sites = 3;
  const long dim = 8;
  for (int x = 0; x < sites; ++x) {
    for (int y = 0; y < sites; ++y) {
      CMatrix ax = annihilator(x, sites), ay = annihilator(y, sites);
      CMatrix acar = ax * ay.adjoint() + ay.adjoint() * ax;
      CMatrix azero = ax * ay + ay * ax;
      if (x == y)
        CHECK((acar - CMatrix::Identity(dim, dim)).norm() <= 1e-14);
      else
        CHECK(acar.norm() <= 1e-14);
      CHECK(azero.norm() <= 1e-14);
    }
  }
}

TEST_CASE("chemical potential maps to occupation") {
  FermionInteraction f;
  f.mu = 1.3;
  const Volume vol = Volume::cube(1, 3);
  const auto h = fermion_hamiltonian(f, vol);

  // Diagonal, value -mu times the number of set bits in the basis index.
  CHECK((h.matrix() - h.matrix().diagonal().asDiagonal().toDenseMatrix()).norm() == 0.0);
  for (long b = 0; b < 8; ++b)
    CHECK(h.matrix()(b, b).real() ==
          doctest::Approx(-1.3 * __builtin_popcountll(b)).epsilon(1e-14));

  // Same thing as -mu sum (1 - sigma_z)/2.
  CMatrix alt = CMatrix::Zero(8, 8);
  for (int x = 0; x < 3; ++x) {
    std::vector<CMatrix> fac(3, CMatrix::Identity(2, 2));
    fac[x] = 0.5 * (CMatrix::Identity(2, 2) - pauli_z());
    alt -= 1.3 * kron(kron(fac[0], fac[1]), fac[2]);
  }
  CHECK((h.matrix() - alt).norm() <= 1e-14);
}

TEST_CASE("single hopping bond") {
  FermionInteraction f;
  f.hopping = {0.7};
  const auto h = fermion_hamiltonian(f, Volume::cube(1, 2));
  CHECK((h.matrix() - car_hamiltonian(f, 2)).norm() <= 1e-14);
  CHECK((h.matrix() - 0.35 * (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()))).norm() <=
        1e-14);
}

TEST_CASE("induced hamiltonian matches the ladder-operator oracle") {
  FermionInteraction f;
  f.hopping = {0.8, 0.3};
  f.mu = 0.5;
  f.density = {0.6};
  const auto h = fermion_hamiltonian(f, Volume::cube(1, 4));
  CHECK((h.matrix() - car_hamiltonian(f, 4)).norm() <= 1e-13);

  FermionInteraction g = f;
  g.pairing = {0.4};
  const auto hp = fermion_hamiltonian(g, Volume::cube(1, 4));
  CHECK((hp.matrix() - car_hamiltonian(g, 4)).norm() <= 1e-13);
}

TEST_CASE("number operator spectrum and commutation") {
  const Volume vol = Volume::cube(1, 5);
  const auto n = number_operator(vol);
  auto es = hermitian_eigensystem(n.matrix());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    CHECK(std::abs(es.values(i) - std::round(es.values(i))) <= 1e-10);
    CHECK(es.values(i) >= -1e-10);
    CHECK(es.values(i) <= 5.0 + 1e-10);
  }
  CHECK(es.values.minCoeff() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.values.maxCoeff() == doctest::Approx(5.0).epsilon(1e-12));

  FermionInteraction f;
  f.hopping = {1.0, 0.4};
  f.mu = 0.7;
  f.density = {0.5};
  const auto h = fermion_hamiltonian(f, vol);
  CHECK(spectral_norm(h.matrix() * n.matrix() - n.matrix() * h.matrix()) <= 1e-12);

  FermionInteraction broken = f;
  broken.pairing = {0.8};
  CHECK(broken.gauge_invariant() == false);
  const auto hb = fermion_hamiltonian(broken, vol);
  CHECK(spectral_norm(hb.matrix() * n.matrix() - n.matrix() * hb.matrix()) > 0.1);
}

TEST_CASE("free chains diagonalize through one-body subset sums") {
  FermionInteraction f;
  f.hopping = {1.0, 0.4};
  f.mu = 0.7;
  const int sites = 6;

  Eigen::MatrixXd one_body = Eigen::MatrixXd::Zero(sites, sites);
  for (int x = 0; x < sites; ++x) {
    one_body(x, x) = -f.mu;
    for (std::size_t idx = 0; idx < f.hopping.size(); ++idx) {
      const int k = static_cast<int>(idx) + 1;
      if (x + k < sites) {
        one_body(x, x + k) = f.hopping[idx];
        one_body(x + k, x) = f.hopping[idx];
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(one_body);
  const Eigen::VectorXd modes = solver.eigenvalues();

  std::vector<double> subset_sums;
  for (long mask = 0; mask < (1L << sites); ++mask) {
    double s = 0;
    for (int j = 0; j < sites; ++j)
      if (mask & (1L << j)) s += modes(j);
    subset_sums.push_back(s);
  }
  std::sort(subset_sums.begin(), subset_sums.end());

  const auto h = fermion_hamiltonian(f, Volume::cube(1, sites));
  auto es = hermitian_eigensystem(h.matrix());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    CHECK(std::abs(es.values(i) - subset_sums[static_cast<std::size_t>(i)]) <= 1e-9);
}

TEST_CASE("number conservation audit") {
  const Volume vol = Volume::cube(1, 6);
  std::mt19937_64 rng(31);
  const auto rho0 = oracle::random_density(vol, kQubit, rng);
  const std::vector<double> times{0.5, 1.5, 4.0};

  FermionInteraction free_chain;
  free_chain.hopping = {1.0};
  auto audit = number_conservation_audit(free_chain, vol, rho0, times);
  CHECK(audit.commutator_norm <= 1e-12);
  for (const auto& row : audit.rows) CHECK(row.drift <= 1e-10);

  FermionInteraction interacting = free_chain;
  interacting.density = {0.8};
  interacting.mu = 0.3;
  audit = number_conservation_audit(interacting, vol, rho0, times);
  CHECK(audit.commutator_norm <= 1e-12);
  for (const auto& row : audit.rows) CHECK(row.drift <= 1e-10);

  FermionInteraction paired = interacting;
  paired.pairing = {0.9};
  audit = number_conservation_audit(paired, vol, rho0, times);
  CHECK(audit.commutator_norm > 0.1);
  REQUIRE(audit.rows.size() == times.size());
  for (std::size_t i = 0; i < audit.rows.size(); ++i) {
    CHECK(audit.rows[i].t == times[i]);
    CHECK(std::isfinite(audit.rows[i].value));
  }
}

TEST_CASE("dimension guard") {
  FermionInteraction f;
  f.hopping = {1.0};
  CHECK_THROWS_AS(fermion_hamiltonian(f, Volume::cube(2, 2)), DimensionNotSupported);
  CHECK_THROWS_AS(number_operator(Volume::cube(2, 2)), DimensionNotSupported);
}

TEST_CASE("fermion quench keeps the number density flat") {
  FermionInteraction initial;
  initial.hopping = {1.0};
  initial.mu = 0.8;
  FermionInteraction driving;
  driving.hopping = {1.0};
  driving.mu = 0.2;
  driving.density = {0.5};

  QuenchExperiment exp;
  exp.psi = jordan_wigner_interaction(initial);
  exp.phi = jordan_wigner_interaction(driving);
  exp.number = number_interaction();
  exp.ambient_side = 8;
  exp.window_side = 4;
  exp.horizons = {1.0, 5.0, 10.0};

  auto report = run_quench(exp);
  REQUIRE(report.initial.e_number.has_value());
  for (const auto& row : report.series) {
    REQUIRE(row.e_number.has_value());
    CHECK(std::abs(*row.e_number - *report.initial.e_number) <= 2e-2);
  }
  // Global number is conserved exactly along the same orbit.
  QuenchExperiment audit_exp = exp;
  audit_exp.times = {1.0, 3.0};
  auto audit = conservation_audit(audit_exp);
  for (const auto& row : audit.rows) {
    REQUIRE(row.global_number_drift.has_value());
    CHECK(*row.global_number_drift <= 1e-10);
  }
}

}  // TEST_SUITE
