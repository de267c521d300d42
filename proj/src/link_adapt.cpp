#include "svb/link_adapt.hpp"

#include <cmath>
#include <stdexcept>

namespace svb {

CMat mmse_filter(const CMat& h, double noise_var) {
  if (!(noise_var > 0.0)) throw std::invalid_argument("mmse_filter: noise_var must be > 0");
  const CMat hh = h.adjoint();
  CMat a = hh * h;  // n_ant x n_ant
  for (int i = 0; i < a.rows(); ++i) a(i, i) += noise_var;
  return inverse_pd(a) * hh;
}

RateVector mmse_rates(const CMat& h, double noise_var) {
  const CMat g = mmse_filter(h, noise_var);
  const int n_ant = h.cols();
  RateVector rates(n_ant, 0.0);
  for (int t = 0; t < n_ant; ++t) {
    double filter_energy = 0.0;
    for (int r = 0; r < h.rows(); ++r) filter_energy += std::norm(g(t, r));
    double signal = 0.0, interference = 0.0;
    for (int q = 0; q < n_ant; ++q) {
      cxd resp = 0.0;
      for (int r = 0; r < h.rows(); ++r) resp += g(t, r) * h(r, q);
      if (q == t)
        signal = std::norm(resp);
      else
        interference += std::norm(resp);
    }
    const double denom = filter_energy * noise_var + interference;
    rates[t] = (signal > 0.0 && denom > 0.0) ? std::log2(1.0 + signal / denom) : 0.0;
  }
  return rates;
}

DecoderChoice choose_decoder(const RateVector& mmse, const RateVector& targets,
                             AntennaSet desired, double threshold) {
  if (mmse.size() != targets.size())
    throw std::invalid_argument("choose_decoder: rate vectors differ in length");
  if (!AntennaSet::full(static_cast<int>(mmse.size())).contains_all(desired))
    throw std::invalid_argument("choose_decoder: desired antenna out of range");
  for (int t : desired.indices())
    if (!(mmse[t] - targets[t] >= threshold)) return DecoderChoice::kSgd;
  return DecoderChoice::kMmse;
}

const char* modulation_name(Modulation m) {
  switch (m) {
    case Modulation::kQpsk: return "qpsk";
    case Modulation::k16Qam: return "16qam";
    case Modulation::k64Qam: return "64qam";
  }
  return "?";
}

double uep_backoff(double rate, double uep_margin, int bits) {
  if (!(rate >= 0.0)) throw std::invalid_argument("uep_backoff: rate must be >= 0");
  if (!(uep_margin >= 0.0)) throw std::invalid_argument("uep_backoff: margin must be >= 0");
  return std::max(0.0, rate - uep_margin * bits);
}

namespace {

bool in_band(Modulation m, double backed_off) {
  switch (m) {
    case Modulation::kQpsk: return backed_off <= 1.0;
    case Modulation::k16Qam: return backed_off > 1.0 && backed_off <= 2.0;
    case Modulation::k64Qam: return backed_off > 2.0;
  }
  return false;
}

McsEntry quantize(Modulation m, double backed_off) {
  McsEntry e;
  e.modulation = m;
  const double wanted = backed_off / bits_per_symbol(m);
  for (double c : kCodeRates)
    if (c <= wanted) e.code_rate = c;
  e.usable = e.code_rate > 0.0;
  e.spectral_rate = e.code_rate * bits_per_symbol(m);
  return e;
}

}  // namespace

McsEntry select_mcs(double rate, double uep_margin) {
  for (Modulation m : {Modulation::k64Qam, Modulation::k16Qam, Modulation::kQpsk}) {
    const double backed_off = uep_backoff(rate, uep_margin, bits_per_symbol(m));
    if (in_band(m, backed_off)) return quantize(m, backed_off);
  }
  // No modulation's own backed-off rate lands in its band (can happen for a
  // narrow range of inputs when the margin is positive); fall back to the
  // most robust modulation.
  return quantize(Modulation::kQpsk, uep_backoff(rate, uep_margin, 2));
}

void UepProfile::validate() const {
  if (margin.empty()) throw std::invalid_argument("uep: at least one layer required");
  if (target_bler.size() != margin.size())
    throw std::invalid_argument("uep: margin and target_bler must list the same layers");
  for (size_t l = 0; l < margin.size(); ++l) {
    if (!(margin[l] >= 0.0) || !std::isfinite(margin[l]))
      throw std::invalid_argument("uep: margins must be finite and >= 0");
    if (!(target_bler[l] >= 0.0 && target_bler[l] < 1.0))
      throw std::invalid_argument("uep: target BLER must lie in [0, 1)");
    if (l > 0 && margin[l] > margin[l - 1] + 1e-12)
      throw std::invalid_argument("uep: margins must not increase with layer index");
  }
}

}  // namespace svb
