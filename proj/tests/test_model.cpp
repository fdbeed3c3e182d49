#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/rng.hpp"
#include "pedfuse/model/checkpoint.hpp"
#include "pedfuse/model/cue_config.hpp"
#include "pedfuse/model/fusion.hpp"
#include "pedfuse/model/parameters.hpp"
#include "pedfuse/nncore/gradcheck.hpp"
#include "test_util.hpp"

using namespace pedfuse;
using namespace pedfuse::model;

namespace {

const ModelDims kSmallDims{8, 8, 8, 16};

data::TrajectorySample sample_fixture(std::uint64_t seed) {
  rng::Engine eng(seed);
  data::TrajectorySample s;
  for (auto& p : s.ped_past) p = {eng.uniform(-2.0, 2.0), eng.uniform(-2.0, 2.0)};
  s.ped_past[4] = {0.0, 0.0};
  for (auto& p : s.veh_past) p = {eng.uniform(-20.0, 20.0), eng.uniform(-4.0, 4.0)};
  for (auto& h : s.head_theta) h = eng.uniform(-3.0, 3.0);
  for (auto& p : s.ped_future) p = {eng.uniform(-3.0, 3.0), eng.uniform(-3.0, 3.0)};
  s.origin_world = {12.0, -4.0};
  s.t = 1.4;
  return s;
}

double max_position_diff(const Forecast& a, const Forecast& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    worst = std::max(worst, std::abs(a.positions[i].x - b.positions[i].x));
    worst = std::max(worst, std::abs(a.positions[i].y - b.positions[i].y));
  }
  return worst;
}

// Loss used by the finite-difference checks: a fixed random weighting of all
// forecast coordinates, so every output contributes gradient signal.
struct WeightedLoss {
  std::array<Vec2, data::kFutureSteps> weights;

  explicit WeightedLoss(std::uint64_t seed) {
    rng::Engine eng(seed);
    for (auto& w : weights) w = {eng.uniform(0.5, 1.5), eng.uniform(0.5, 1.5)};
  }
  double value(const Forecast& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      s += weights[i].x * f.positions[i].x + weights[i].y * f.positions[i].y;
    }
    return s;
  }
};

}  // namespace

TEST_CASE("initialization is deterministic and seed-sensitive") {
  const ModelParameters a = init_parameters(kSmallDims, kMethod2, 42);
  const ModelParameters b = init_parameters(kSmallDims, kMethod2, 42);
  const ModelParameters c = init_parameters(kSmallDims, kMethod2, 43);
  CHECK(a == b);
  CHECK(to_flat_vector(a) == to_flat_vector(b));
  CHECK(to_flat_vector(a) != to_flat_vector(c));
}

TEST_CASE("encoders shared between cue configs start identically") {
  const ModelParameters base = init_parameters(kSmallDims, kBaseline, 7);
  const ModelParameters m1 = init_parameters(kSmallDims, kMethod1, 7);
  const ModelParameters m2 = init_parameters(kSmallDims, kMethod2, 7);
  CHECK(base.ped_encoder == m1.ped_encoder);
  CHECK(m1.ped_encoder == m2.ped_encoder);
  CHECK(m1.veh_encoder == m2.veh_encoder);
  CHECK(base.veh_encoder.empty());
  CHECK(base.head_encoder.empty());
  CHECK(m1.head_encoder.empty());
}

TEST_CASE("parameter count matches the closed form and the stored values") {
  const ModelParameters m = init_parameters(ModelDims{64, 64, 64, 128}, kBaseline, 1);
  // ped encoder 4*64*(2+64+1), decoder 4*128*(64+128+1), projection 2*128+2
  const std::size_t expected = 4 * 64 * 67 + 4 * 128 * 193 + 258;
  CHECK(m.parameter_count() == expected);
  CHECK(to_flat_vector(m).size() == expected);
  CHECK(m.context_dim() == 64);

  const ModelParameters m2 = init_parameters(ModelDims{64, 64, 64, 128}, kMethod2, 1);
  CHECK(m2.context_dim() == 192);
  CHECK(m2.parameter_count() == 3 * (4 * 64 * 67) + 4 * 128 * (192 + 128 + 1) + 258);
  CHECK(to_flat_vector(m2).size() == m2.parameter_count());
}

TEST_CASE("weights respect the fan-in bound and biases start at zero") {
  const ModelParameters m = init_parameters(kSmallDims, kMethod2, 3);
  const double enc_bound = 1.0 / std::sqrt(2.0 + 8.0);
  for (double w : m.ped_encoder.w_input.data()) {
    CHECK(w < enc_bound);
    CHECK(w > -enc_bound);
  }
  for (double b : m.ped_encoder.b_forget) CHECK(b == 0.0);
  for (double b : m.decoder.b_input) CHECK(b == 0.0);
  for (double b : m.projection_bias) CHECK(b == 0.0);
  const double dec_bound = 1.0 / std::sqrt(24.0 + 16.0);
  for (double w : m.decoder.w_output.data()) CHECK(std::abs(w) < dec_bound);
}

TEST_CASE("initialization rejects zero-sized active blocks") {
  CHECK_THROWS_AS(init_parameters(ModelDims{0, 8, 8, 16}, kBaseline, 1), std::invalid_argument);
  CHECK_THROWS_AS(init_parameters(ModelDims{8, 0, 8, 16}, kMethod1, 1), std::invalid_argument);
  CHECK_THROWS_AS(init_parameters(ModelDims{8, 8, 0, 16}, kMethod2, 1), std::invalid_argument);
  CHECK_THROWS_AS(init_parameters(ModelDims{8, 8, 8, 0}, kBaseline, 1), std::invalid_argument);
  // Disabled streams may carry any requested size; it is stored as zero.
  const ModelParameters m = init_parameters(ModelDims{8, 0, 0, 16}, kBaseline, 1);
  CHECK(m.dims.veh_hidden == 0);
}

TEST_CASE("encode equals manual unrolling and is order-sensitive") {
  rng::Engine eng(17);
  ModelParameters m = init_parameters(kSmallDims, kBaseline, 17);
  std::vector<std::vector<double>> seq;
  for (int t = 0; t < 5; ++t) seq.push_back({eng.uniform(-1.0, 1.0), eng.uniform(-1.0, 1.0)});

  const EncodeResult enc = encode(seq, m.ped_encoder);
  nncore::LstmState manual = nncore::LstmState::zeros(8);
  for (const auto& x : seq) manual = nncore::lstm_step_forward(x, manual, m.ped_encoder).first;
  CHECK(enc.final_state.hidden == manual.hidden);
  CHECK(enc.final_state.cell == manual.cell);
  CHECK(enc.caches.size() == 5);

  std::vector<std::vector<double>> permuted = seq;
  std::swap(permuted[0], permuted[3]);
  const EncodeResult enc2 = encode(permuted, m.ped_encoder);
  CHECK(enc.final_state.hidden != enc2.final_state.hidden);

  seq.pop_back();
  CHECK_THROWS_AS(encode(seq, m.ped_encoder), std::invalid_argument);
}

TEST_CASE("all-zero weights and inputs encode to the zero state") {
  const nncore::LstmParams zero = nncore::LstmParams::zeros(2, 4);
  const std::vector<std::vector<double>> seq(5, std::vector<double>{0.0, 0.0});
  const EncodeResult enc = encode(seq, zero);
  for (double h : enc.final_state.hidden) CHECK(h == 0.0);
  for (double c : enc.final_state.cell) CHECK(c == 0.0);
}

TEST_CASE("all-zero parameters forecast ten origin points") {
  ModelParameters m = init_parameters(kSmallDims, kMethod2, 1);
  from_flat_vector(std::vector<double>(m.parameter_count(), 0.0), m);
  const auto [forecast, caches] = forward(sample_fixture(2), m);
  for (const Vec2& p : forecast.positions) {
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
  }
  CHECK(caches.decoder.size() == 10);
  CHECK(caches.decoder_hidden.size() == 10);
}

TEST_CASE("disabled streams cannot influence the forecast") {
  const data::TrajectorySample clean = sample_fixture(5);
  data::TrajectorySample noisy = clean;
  for (auto& p : noisy.veh_past) p = p + Vec2{97.0, -55.0};
  for (auto& h : noisy.head_theta) h += 2.3;

  SUBCASE("baseline ignores vehicle and head") {
    const ModelParameters m = init_parameters(kSmallDims, kBaseline, 11);
    CHECK(predict(clean, m) == predict(noisy, m));
  }
  SUBCASE("method1 ignores head only") {
    const ModelParameters m = init_parameters(kSmallDims, kMethod1, 11);
    data::TrajectorySample head_noise = clean;
    for (auto& h : head_noise.head_theta) h -= 1.9;
    CHECK(predict(clean, m) == predict(head_noise, m));
    CHECK(max_position_diff(predict(clean, m), predict(noisy, m)) > 1e-12);
  }
  SUBCASE("method2 reacts to head orientation at every timestep") {
    const ModelParameters m = init_parameters(kSmallDims, kMethod2, 11);
    for (std::size_t t = 0; t < data::kPastSteps; ++t) {
      data::TrajectorySample bumped = clean;
      bumped.head_theta[t] += 0.4;
      CHECK(max_position_diff(predict(clean, m), predict(bumped, m)) > 1e-12);
    }
  }
}

TEST_CASE("context concatenation order is load-bearing") {
  ModelParameters m = init_parameters(ModelDims{8, 8, 8, 16}, kMethod1, 23);
  const data::TrajectorySample s = sample_fixture(8);
  const Forecast before = predict(s, m);
  std::swap(m.ped_encoder, m.veh_encoder);
  CHECK(max_position_diff(before, predict(s, m)) > 1e-12);
}

TEST_CASE("forward is deterministic") {
  const ModelParameters m = init_parameters(kSmallDims, kMethod2, 31);
  const data::TrajectorySample s = sample_fixture(31);
  CHECK(predict(s, m) == predict(s, m));
}

TEST_CASE("zero forecast gradient produces zero parameter gradients") {
  const ModelParameters m = init_parameters(kSmallDims, kMethod2, 37);
  const auto [forecast, caches] = forward(sample_fixture(37), m);
  const std::array<Vec2, data::kFutureSteps> zero_grad{};
  const ModelParameters grads = backward(zero_grad, caches, m);
  CHECK(grads == zeros_like(m));
}

TEST_CASE("inactive encoders receive structurally empty gradients") {
  const ModelParameters m = init_parameters(kSmallDims, kBaseline, 41);
  const auto [forecast, caches] = forward(sample_fixture(41), m);
  std::array<Vec2, data::kFutureSteps> d{};
  d[0] = {1.0, -1.0};
  const ModelParameters grads = backward(d, caches, m);
  CHECK(grads.veh_encoder.parameter_count() == 0);
  CHECK(grads.head_encoder.parameter_count() == 0);
  bool ped_touched = false;
  for (double g : grads.ped_encoder.w_input.data()) ped_touched = ped_touched || g != 0.0;
  CHECK(ped_touched);
}

TEST_CASE("backward rejects mismatched caches") {
  const ModelParameters m2 = init_parameters(kSmallDims, kMethod2, 43);
  const ModelParameters m0 = init_parameters(kSmallDims, kBaseline, 43);
  const auto [forecast, caches] = forward(sample_fixture(43), m0);
  const std::array<Vec2, data::kFutureSteps> d{};
  CHECK_THROWS_AS(backward(d, caches, m2), std::invalid_argument);
}

TEST_CASE("full-model gradients agree with finite differences") {
  const WeightedLoss loss(1234);
  const data::TrajectorySample s = sample_fixture(99);

  for (const CueConfig cues : {kBaseline, kMethod1, kMethod2}) {
    CAPTURE(method_name(cues));
    ModelParameters m = init_parameters(kSmallDims, cues, 57);
    const auto [forecast, caches] = forward(s, m);
    std::array<Vec2, data::kFutureSteps> d_forecast = loss.weights;
    const ModelParameters grads = backward(d_forecast, caches, m);

    const std::vector<double> flat = to_flat_vector(m);
    const std::vector<double> analytic = to_flat_vector(grads);
    const double err = nncore::gradient_check(
        [&](std::span<const double> q) {
          ModelParameters probe = m;
          from_flat_vector(q, probe);
          return loss.value(predict(s, probe));
        },
        analytic, flat, 1e-5);
    // FD noise floor: coordinates with ~1e-5 gradients see ~2e-10 absolute
    // central-difference error, i.e. a few 1e-5 relative.
    CHECK(err < 1e-4);
  }
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  TempDir dir("ckpt");
  for (const CueConfig cues : {kBaseline, kMethod1, kMethod2}) {
    const ModelParameters m = init_parameters(ModelDims{8, 6, 5, 16}, cues, 4242);
    const auto file = dir.path / (method_name(cues) + ".ckpt");
    save_checkpoint(file, m);
    const ModelParameters loaded = load_checkpoint(file);
    CHECK(loaded == m);

    // Header is 40 bytes, values 8 apiece.
    CHECK(std::filesystem::file_size(file) == 40 + 8 * m.parameter_count());

    const auto file2 = dir.path / (method_name(cues) + ".again.ckpt");
    save_checkpoint(file2, loaded);
    std::ifstream f1(file, std::ios::binary), f2(file2, std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
  }
}

TEST_CASE("checkpoint loading rejects corruption") {
  TempDir dir("ckpt-bad");
  const ModelParameters m = init_parameters(kSmallDims, kMethod1, 8);
  const auto file = dir.path / "good.ckpt";
  save_checkpoint(file, m);

  SUBCASE("bad magic") {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXXXXXX", 8);
    f.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(file), doctest::Contains("bad magic"), DataError);
  }
  SUBCASE("truncation") {
    std::ifstream in(file, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 9));
    out.close();
    CHECK_THROWS_AS(load_checkpoint(file), IoError);
  }
  SUBCASE("trailing bytes") {
    std::ofstream out(file, std::ios::binary | std::ios::app);
    out.put('\0');
    out.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(file), doctest::Contains("trailing"), DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_checkpoint(dir.path / "nope.ckpt"), IoError);
  }
}

TEST_CASE("method names map to cue configurations") {
  CHECK(cues_for_method("baseline") == kBaseline);
  CHECK(cues_for_method("method1") == kMethod1);
  CHECK(cues_for_method("method2") == kMethod2);
  CHECK(method_name(kMethod2) == "method2");
  CHECK(method_name(CueConfig{false, true}) == "head_only");
  CHECK(cues_for_method("head_only") == CueConfig{false, true});
  CHECK_THROWS_AS(cues_for_method("method3"), std::invalid_argument);
}

TEST_CASE("flat vector round-trip and scaled accumulation") {
  ModelParameters m = init_parameters(kSmallDims, kMethod2, 71);
  const std::vector<double> flat = to_flat_vector(m);
  ModelParameters copy = zeros_like(m);
  from_flat_vector(flat, copy);
  CHECK(copy.ped_encoder == m.ped_encoder);
  CHECK(copy.projection_weight == m.projection_weight);

  CHECK_THROWS_AS(from_flat_vector(std::vector<double>(flat.size() - 1), copy),
                  std::invalid_argument);

  ModelParameters acc = zeros_like(m);
  add_scaled(acc, m, -2.0);
  const std::vector<double> got = to_flat_vector(acc);
  for (std::size_t i = 0; i < flat.size(); ++i) CHECK(got[i] == -2.0 * flat[i]);
}
