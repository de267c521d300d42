#pragma once

#include <span>
#include <string>
#include <vector>

namespace svb {

// Piecewise-linear rate/quality model of a layered (scalable) video stream.
// Layer l ends at cumulative rate cum_rate[l] with quality quality_db[l];
// slope[l] is the quality gain per bit inside layer l's rate range, and
// slope[0] also extends below cum_rate[0] (anchored at the base-layer point).
// Quality saturates at quality_db.back() beyond the last layer.
//
// Rates are in payload bits per transmission interval; only consistency with
// the allocator's bit accounting matters, not the absolute time base.
struct QualityModel {
  std::string name;
  std::vector<double> cum_rate;    // strictly increasing, cum_rate[0] > 0
  std::vector<double> quality_db;  // non-decreasing anchors
  std::vector<double> slope;       // > 0, continuity: q[l] = q[l-1] + slope[l]*(v[l]-v[l-1])

  int layers() const { return static_cast<int>(cum_rate.size()); }

  // Rate span of layer l on top of the layers below it.
  double gap(int l) const { return l == 0 ? cum_rate[0] : cum_rate[l] - cum_rate[l - 1]; }

  double floor_db() const { return quality_db[0] - slope[0] * cum_rate[0]; }
  double ceiling_db() const { return quality_db.back(); }

  // Builds the model from anchor points; interior slopes follow from
  // continuity, base_slope sets the gradient at and below the base layer.
  static QualityModel from_anchors(std::string name, std::vector<double> cum_rate,
                                   std::vector<double> quality_db, double base_slope);

  void validate() const;

  // Diminishing returns (slope[l] non-increasing) is expected of sane models
  // but not enforced; callers may warn.
  bool slopes_non_increasing() const;
};

// Quality in dB at a received cumulative rate.
double psnr_of_rate(const QualityModel& model, double rate);

// Usable bits of layer `layer` given per-layer received bits: the layer
// counts only when every lower layer arrived in full (otherwise its data
// cannot be stitched into the stream and the effective rate is zero).
double effective_layer_bits(const QualityModel& model, std::span<const double> layer_bits,
                            int layer);

// Cumulative decodable rate: sum over layers of the effective bits, each
// clipped to the layer's rate span.
double received_rate(const QualityModel& model, std::span<const double> layer_bits);

// Average quality across users; rates[k] is user k's received cumulative rate.
double mean_psnr(std::span<const QualityModel> models, std::span<const double> rates);

}  // namespace svb
