#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nanospin/material.hpp"

using namespace nanospin;

namespace {

const DielectricParams kSiC = DielectricParams::silicon_carbide();

ParticleSpec particle(PolarizabilityModel model = PolarizabilityModel::bare) {
  ParticleSpec p;
  p.polarizability_model = model;
  return p;
}

// Central difference with a step small against both omega and the linewidth.
double central_difference(double omega, const ParticleSpec& p) {
  const double h = 1e-5 * std::min(std::abs(omega), p.dielectric.gamma);
  return (im_polarizability(omega + h, p) - im_polarizability(omega - h, p)) / (2.0 * h);
}

}  // namespace

TEST(Material, SiliconCarbideDefaults) {
  EXPECT_EQ(kSiC.eps_inf, 6.7);
  EXPECT_EQ(kSiC.omega_L, 1.823e14);
  EXPECT_EQ(kSiC.omega_T, 1.492e14);
  EXPECT_EQ(kSiC.gamma, 8.954e11);
  EXPECT_NO_THROW(kSiC.validate());
}

TEST(Material, ParamValidation) {
  auto p = kSiC;
  p.omega_L = p.omega_T;
  EXPECT_THROW(p.validate(), ConfigError);
  p = kSiC;
  p.gamma = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = kSiC;
  p.eps_inf = 0.5;
  EXPECT_THROW(p.validate(), ConfigError);
  ParticleSpec s;
  s.radius = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Material, StaticLimit) {
  const auto eps = permittivity(0.0, kSiC);
  const double oracle = kSiC.eps_inf * kSiC.omega_L * kSiC.omega_L / (kSiC.omega_T * kSiC.omega_T);
  EXPECT_NEAR(eps.real(), oracle, 1e-12 * oracle);
  EXPECT_NEAR(eps.real(), 10.0025, 1e-4);
  EXPECT_EQ(eps.imag(), 0.0);
}

TEST(Material, HighFrequencyLimit) {
  const auto eps = permittivity(1e18, kSiC);
  EXPECT_NEAR(eps.real(), 6.7, 1e-6);
  EXPECT_NEAR(eps.imag(), 0.0, 1e-6);
}

TEST(Material, TransverseResonance) {
  const double w = kSiC.omega_T;
  const double oracle = kSiC.eps_inf * (kSiC.omega_L * kSiC.omega_L - w * w) / (kSiC.gamma * w);
  EXPECT_NEAR(permittivity(w, kSiC).imag(), oracle, 1e-10 * oracle);
  EXPECT_NEAR(oracle, 550.3, 0.05);
}

TEST(Material, VolumeAndPolarizabilityAtResonance) {
  const auto p = particle();
  EXPECT_NEAR(p.volume(), 5.236e-25, 1e-28);
  EXPECT_NEAR(p.volume(), 4.0 * constants::pi * std::pow(5e-9, 3) / 3.0, 1e-12 * p.volume());
  const double alpha = im_polarizability(kSiC.omega_T, p);
  EXPECT_NEAR(alpha, p.volume() * permittivity(kSiC.omega_T, kSiC).imag(), 1e-12 * alpha);
  EXPECT_NEAR(alpha, 2.88e-22, 0.005e-22);
}

TEST(Material, ClausiusMossottiForm) {
  const auto p = particle(PolarizabilityModel::clausius_mossotti);
  for (double w : {1e12, 1.4e14, 1.75e14, 3e14}) {
    const auto eps = permittivity(w, kSiC);
    const double expected = (3.0 * p.volume() * (eps - 1.0) / (eps + 2.0)).imag();
    EXPECT_NEAR(im_polarizability(w, p), expected, 1e-12 * std::abs(expected));
  }
  // Peak sits where Re eps = -2.
  const double wf = polarizability_resonance(p);
  EXPECT_NEAR(permittivity(wf, kSiC).real(), -2.0, 0.01);
}

TEST(Material, ConjugateSymmetry) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logw(8.0, 17.0);
  for (int i = 0; i < 200; ++i) {
    const double w = std::pow(10.0, logw(rng));
    const auto pos = permittivity(w, kSiC);
    const auto neg = permittivity(-w, kSiC);
    EXPECT_NEAR(neg.real(), pos.real(), 1e-12 * std::abs(pos.real()));
    EXPECT_NEAR(neg.imag(), -pos.imag(), 1e-12 * std::abs(pos.imag()));
    EXPECT_GT(pos.imag(), 0.0);
  }
}

TEST(Material, PolarizabilityIsOddInBothModels) {
  for (auto model : {PolarizabilityModel::bare, PolarizabilityModel::clausius_mossotti}) {
    const auto p = particle(model);
    for (double w : {1e9, 1e13, 1.49e14, 1.75e14, 1e15}) {
      const double a = im_polarizability(w, p);
      EXPECT_GT(a, 0.0);
      EXPECT_NEAR(im_polarizability(-w, p), -a, 1e-13 * a);
    }
  }
}

TEST(Material, DerivativeMatchesFiniteDifferenceAt1e14) {
  const auto p = particle();
  const double h = 1e8;
  const double fd = (im_polarizability(1e14 + h, p) - im_polarizability(1e14 - h, p)) / (2.0 * h);
  const double exact = d_im_polarizability(1e14, p);
  EXPECT_LE(std::abs(exact - fd), 1e-6 * std::abs(exact));
}

TEST(Material, DerivativeLogGrid) {
  for (auto model : {PolarizabilityModel::bare, PolarizabilityModel::clausius_mossotti}) {
    const auto p = particle(model);
    for (int i = 0; i < 20; ++i) {
      const double w = std::pow(10.0, 10.0 + 6.0 * i / 19.0);
      const double exact = d_im_polarizability(w, p);
      const double fd = central_difference(w, p);
      EXPECT_LE(std::abs(exact - fd), 1e-6 * std::abs(exact)) << "omega = " << w;
    }
  }
}

TEST(Material, DerivativeAtZeroAndParity) {
  const auto p = particle();
  const double slope = d_im_polarizability(0.0, p);
  const double dl = kSiC.omega_L * kSiC.omega_L - kSiC.omega_T * kSiC.omega_T;
  // Im eps ~ eps_inf (wL^2 - wT^2) gamma w / wT^4 for small w
  const double oracle = p.volume() * kSiC.eps_inf * dl * kSiC.gamma / std::pow(kSiC.omega_T, 4);
  EXPECT_GT(slope, 0.0);
  EXPECT_NEAR(slope, oracle, 1e-12 * oracle);
  for (double w : {1e11, 1.4e14, 1.5e14, 5e14}) {
    const double d = d_im_polarizability(w, p);
    EXPECT_NEAR(d_im_polarizability(-w, p), d, 1e-13 * std::abs(d));
  }
}
