#include "svb/video_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svb {

QualityModel QualityModel::from_anchors(std::string name, std::vector<double> cum_rate,
                                        std::vector<double> quality_db, double base_slope) {
  QualityModel m;
  m.name = std::move(name);
  m.cum_rate = std::move(cum_rate);
  m.quality_db = std::move(quality_db);
  m.slope.resize(m.cum_rate.size());
  if (!m.slope.empty()) {
    m.slope[0] = base_slope;
    for (size_t l = 1; l < m.cum_rate.size(); ++l)
      m.slope[l] =
          (m.quality_db[l] - m.quality_db[l - 1]) / (m.cum_rate[l] - m.cum_rate[l - 1]);
  }
  m.validate();
  return m;
}

void QualityModel::validate() const {
  if (cum_rate.empty()) throw std::invalid_argument("quality model: at least one layer required");
  if (quality_db.size() != cum_rate.size() || slope.size() != cum_rate.size())
    throw std::invalid_argument("quality model: rate, quality and slope lists must align");
  if (!(cum_rate[0] > 0.0)) throw std::invalid_argument("quality model: base rate must be > 0");
  for (size_t l = 0; l < cum_rate.size(); ++l) {
    if (!std::isfinite(cum_rate[l]) || !std::isfinite(quality_db[l]) || !std::isfinite(slope[l]))
      throw std::invalid_argument("quality model: entries must be finite");
    if (!(slope[l] > 0.0)) throw std::invalid_argument("quality model: slopes must be > 0");
    if (l > 0) {
      if (!(cum_rate[l] > cum_rate[l - 1]))
        throw std::invalid_argument("quality model: cumulative rates must increase");
      const double implied = quality_db[l - 1] + slope[l] * (cum_rate[l] - cum_rate[l - 1]);
      if (std::abs(implied - quality_db[l]) > 1e-9)
        throw std::invalid_argument("quality model: slope breaks quality continuity");
    }
  }
}

bool QualityModel::slopes_non_increasing() const {
  for (size_t l = 1; l < slope.size(); ++l)
    if (slope[l] > slope[l - 1] + 1e-12) return false;
  return true;
}

double psnr_of_rate(const QualityModel& model, double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("psnr_of_rate: rate must be >= 0");
  if (rate < model.cum_rate[0])
    return model.quality_db[0] - model.slope[0] * (model.cum_rate[0] - rate);
  for (int l = 1; l < model.layers(); ++l)
    if (rate <= model.cum_rate[l])
      return model.quality_db[l - 1] + model.slope[l] * (rate - model.cum_rate[l - 1]);
  return model.quality_db.back();
}

double effective_layer_bits(const QualityModel& model, std::span<const double> layer_bits,
                            int layer) {
  if (layer < 0 || layer >= model.layers())
    throw std::invalid_argument("effective_layer_bits: layer out of range");
  if (static_cast<int>(layer_bits.size()) != model.layers())
    throw std::invalid_argument("effective_layer_bits: need bits for every layer");
  for (int q = 0; q < layer; ++q)
    if (layer_bits[q] < model.gap(q)) return 0.0;
  return layer_bits[layer];
}

double received_rate(const QualityModel& model, std::span<const double> layer_bits) {
  double total = 0.0;
  for (int l = 0; l < model.layers(); ++l)
    total += std::min(effective_layer_bits(model, layer_bits, l), model.gap(l));
  return total;
}

double mean_psnr(std::span<const QualityModel> models, std::span<const double> rates) {
  if (models.empty() || models.size() != rates.size())
    throw std::invalid_argument("mean_psnr: need one rate per model");
  double sum = 0.0;
  for (size_t k = 0; k < models.size(); ++k) sum += psnr_of_rate(models[k], rates[k]);
  return sum / static_cast<double>(models.size());
}

}  // namespace svb
