#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "gate/pantograph.hpp"
#include "gate/synth/pantograph_scene.hpp"

namespace gate::pantograph {
namespace {

const FeatureModel& template_model() {
  static const FeatureModel m = build_model(synth::pantograph_template());
  return m;
}

Descriptor random_descriptor(std::mt19937_64& rng, int levels = 0) {
  std::uniform_real_distribution<float> u(0, 1);
  Descriptor d;
  double n = 0;
  for (auto& v : d) {
    v = u(rng);
    if (levels > 0) v = std::floor(v * levels) / levels;
    n += double(v) * v;
  }
  if (n == 0) d[0] = 1, n = 1;
  for (auto& v : d) v = static_cast<float>(v / std::sqrt(n));
  return d;
}

Neighbors brute_force(const std::vector<Descriptor>& pts, const Descriptor& q) {
  Neighbors n;
  double s1 = INFINITY, s2 = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = 0;
    for (int k = 0; k < kDescriptorSize; ++k) {
      const double d = double(q[static_cast<std::size_t>(k)]) - pts[i][static_cast<std::size_t>(k)];
      s += d * d;
    }
    if (s < s1) {
      s2 = s1, n.second = n.first;
      s1 = s, n.first = static_cast<int>(i);
    } else if (s < s2) {
      s2 = s, n.second = static_cast<int>(i);
    }
  }
  n.d1 = std::sqrt(s1);
  n.d2 = std::sqrt(s2);
  return n;
}

GrayImage warp_image(const GrayImage& src, const Homography& H, int w, int h, std::uint8_t fill) {
  GrayImage out(w, h, fill);
  const Homography inv = H.inverse();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto s = apply(inv, {double(x), double(y)});
      if (!s) continue;
      const int x0 = static_cast<int>(std::floor(s->x)), y0 = static_cast<int>(std::floor(s->y));
      if (x0 < 0 || y0 < 0 || x0 + 1 >= src.width() || y0 + 1 >= src.height()) continue;
      const double fx = s->x - x0, fy = s->y - y0;
      const double v = (1 - fx) * (1 - fy) * src(x0, y0) + fx * (1 - fy) * src(x0 + 1, y0) +
                       (1 - fx) * fy * src(x0, y0 + 1) + fx * fy * src(x0 + 1, y0 + 1);
      out(x, y) = static_cast<std::uint8_t>(std::lround(v));
    }
  return out;
}

double max_corner_error(const Homography& a, const Homography& b, int w, int h) {
  double e = 0;
  for (auto c : {Vec2{0, 0}, Vec2{double(w), 0}, Vec2{double(w), double(h)}, Vec2{0, double(h)}}) {
    const auto p = *apply(a, c), q = *apply(b, c);
    e = std::max(e, std::hypot(p.x - q.x, p.y - q.y));
  }
  return e;
}

Homography planted_h(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Homography H;
  H << 1 + 0.1 * u(rng), 0.25 * u(rng), 400 + 200 * u(rng), 0.1 * u(rng), 1 + 0.1 * u(rng), 80 + 40 * u(rng),
      3e-4 * u(rng), 3e-4 * u(rng), 1;
  return H;
}

// ---------------------------------------------------------------- features

TEST(Features, ConstantImageHasNoKeypoints) {
  EXPECT_TRUE(extract_features(GrayImage(96, 96, 128)).keypoints.empty());
}

TEST(Features, TooSmallImageThrows) {
  try {
    extract_features(GrayImage(31, 64, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::image_too_small);
  }
}

TEST(Features, DescriptorsAreUnitAndKeypointsWellFormed) {
  const auto f = extract_features(synth::pantograph_template());
  ASSERT_GE(f.keypoints.size(), 40u);
  ASSERT_EQ(f.keypoints.size(), f.descriptors.size());
  for (std::size_t i = 0; i < f.keypoints.size(); ++i) {
    double n = 0;
    for (float v : f.descriptors[i]) {
      EXPECT_GE(v, 0.0f);
      n += double(v) * v;
    }
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-6);
    EXPECT_GT(f.keypoints[i].scale, 0);
    EXPECT_GE(f.keypoints[i].orientation, 0);
    EXPECT_LT(f.keypoints[i].orientation, 2 * std::numbers::pi);
  }
}

TEST(Features, Deterministic) {
  const auto a = extract_features(synth::pantograph_template());
  const auto b = extract_features(synth::pantograph_template());
  ASSERT_EQ(a.descriptors.size(), b.descriptors.size());
  EXPECT_EQ(a.descriptors, b.descriptors);
}

TEST(Features, RotationInvariance) {
  const GrayImage templ = synth::pantograph_template();
  const double th = 30 * std::numbers::pi / 180;
  const int W = 360, H = 320;
  Homography R;
  R << std::cos(th), -std::sin(th), 0, std::sin(th), std::cos(th), 0, 0, 0, 1;
  Homography Tc, Tb;
  Tc << 1, 0, -templ.width() / 2.0, 0, 1, -templ.height() / 2.0, 0, 0, 1;
  Tb << 1, 0, W / 2.0, 0, 1, H / 2.0, 0, 0, 1;
  const Homography M = Tb * R * Tc;
  const auto rotated = extract_features(warp_image(templ, M, W, H, synth::kRoofTone));
  const auto& model = template_model();
  const auto matches = match_descriptors(model.index, rotated.descriptors, 0.67, {true, 0});
  std::set<int> correct;
  for (const auto& m : matches) {
    const auto& t = model.keypoints[static_cast<std::size_t>(m.template_idx)];
    const auto& s = rotated.keypoints[static_cast<std::size_t>(m.scene_idx)];
    const auto p = *apply(M, {t.x, t.y});
    if (std::hypot(p.x - s.x, p.y - s.y) <= 3.0) correct.insert(m.template_idx);
  }
  EXPECT_GE(correct.size() * 2, model.keypoints.size()) << correct.size() << " of " << model.keypoints.size();
}

TEST(Features, GainAndOffsetKeepKeypoints) {
  const GrayImage templ = synth::pantograph_template();
  GrayImage bright = templ;
  for (auto& v : bright.pixels()) v = static_cast<std::uint8_t>(std::min(255.0, 1.5 * v + 20));
  const auto a = extract_features(templ);
  const auto b = extract_features(bright);
  std::size_t kept = 0;
  for (const auto& k : a.keypoints) {
    for (const auto& q : b.keypoints) {
      if (std::hypot(k.x - q.x, k.y - q.y) <= 1.5 && std::fabs(std::log(k.scale / q.scale)) < 0.25) {
        ++kept;
        break;
      }
    }
  }
  EXPECT_GE(kept * 10, a.keypoints.size() * 8) << kept << " of " << a.keypoints.size();
}

// ---------------------------------------------------------------- index

TEST(KdTree, TooFewDescriptors) {
  std::mt19937_64 rng(1);
  try {
    KdTree t(std::vector<Descriptor>{random_descriptor(rng)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::too_few_descriptors);
  }
}

TEST(KdTree, QueryEqualToMember) {
  std::mt19937_64 rng(2);
  const std::vector<Descriptor> pts{random_descriptor(rng), random_descriptor(rng)};
  const KdTree t(pts);
  const auto n = t.nearest2(pts[1]);
  EXPECT_EQ(n.first, 1);
  EXPECT_EQ(n.d1, 0.0);
  EXPECT_EQ(n.second, 0);
}

TEST(KdTree, ExactModeEqualsBruteForce) {
  std::mt19937_64 rng(3);
  std::vector<Descriptor> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back(random_descriptor(rng));
  const KdTree t(pts);
  for (int q = 0; q < 100; ++q) {
    const auto d = random_descriptor(rng);
    const auto a = t.nearest2(d, {true, 0});
    const auto b = brute_force(pts, d);
    ASSERT_EQ(a.first, b.first);
    ASSERT_EQ(a.second, b.second);
    ASSERT_EQ(a.d1, b.d1);
    ASSERT_EQ(a.d2, b.d2);
  }
}

TEST(KdTree, ExactModeBreaksTiesByLowerIndex) {
  std::mt19937_64 rng(4);
  std::vector<Descriptor> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(random_descriptor(rng, 2));  // coarse values: many ties
  for (int i = 0; i < 100; ++i) pts.push_back(pts[static_cast<std::size_t>(i * 3)]);
  const KdTree t(pts);
  for (int q = 0; q < 100; ++q) {
    const auto d = q % 2 ? pts[static_cast<std::size_t>(q)] : random_descriptor(rng, 2);
    const auto a = t.nearest2(d);
    const auto b = brute_force(pts, d);
    ASSERT_EQ(a.first, b.first);
    ASSERT_EQ(a.second, b.second);
  }
}

TEST(KdTree, DuplicatedSetGivesEqualDistances) {
  std::mt19937_64 rng(5);
  std::vector<Descriptor> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(random_descriptor(rng));
  auto doubled = pts;
  doubled.insert(doubled.end(), pts.begin(), pts.end());
  const KdTree t(doubled);
  for (int q = 0; q < 30; ++q) {
    const auto n = t.nearest2(random_descriptor(rng));
    EXPECT_EQ(n.d1, n.d2);
    EXPECT_EQ(n.second, n.first + 50);
  }
}

TEST(KdTree, ApproximateModeWithinFivePercent) {
  std::mt19937_64 rng(6);
  std::vector<Descriptor> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back(random_descriptor(rng));
  const KdTree t(pts);
  for (int q = 0; q < 100; ++q) {
    const auto d = random_descriptor(rng);
    const auto a = t.nearest2(d, {false, 0.05});
    const auto b = brute_force(pts, d);
    ASSERT_LE(a.d1, 1.05 * b.d1 + 1e-12);
    ASSERT_LE(a.d2, 1.05 * b.d2 + 1e-12);
  }
}

TEST(KdTree, RebuildIsDeterministic) {
  const auto& m = template_model();
  const KdTree again(m.descriptors());
  const auto f = extract_features(synth::pantograph_template());
  for (const auto& d : f.descriptors) {
    const auto a = m.index.nearest2(d), b = again.nearest2(d);
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
  }
}

// ---------------------------------------------------------------- matching

TEST(Match, VacuousRatioKeepsEveryQuery) {
  std::mt19937_64 rng(7);
  std::vector<Descriptor> pts, scene;
  for (int i = 0; i < 40; ++i) pts.push_back(random_descriptor(rng));
  for (int i = 0; i < 25; ++i) scene.push_back(random_descriptor(rng));
  const KdTree t(pts);
  EXPECT_EQ(match_descriptors(t, scene, 1.0).size(), 25u);
  EXPECT_TRUE(match_descriptors(t, scene, 1e-9).empty());
  EXPECT_THROW(match_descriptors(t, scene, 0.0), Error);
  EXPECT_THROW(match_descriptors(t, scene, 1.5), Error);
}

TEST(Match, ZeroSecondDistancePasses) {
  std::mt19937_64 rng(8);
  const auto d = random_descriptor(rng);
  const KdTree t(std::vector<Descriptor>{d, d});
  const auto m = match_descriptors(t, std::vector<Descriptor>{d}, 0.1);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].d2, 0.0);
}

TEST(Match, RatioMonotone) {
  std::mt19937_64 rng(9);
  std::vector<Descriptor> pts, scene;
  for (int i = 0; i < 200; ++i) pts.push_back(random_descriptor(rng));
  for (int i = 0; i < 200; ++i) {
    auto d = pts[static_cast<std::size_t>(i)];
    d[static_cast<std::size_t>(i % 128)] += 0.05f * static_cast<float>(i % 7);
    scene.push_back(d);
  }
  const KdTree t(pts);
  std::vector<Match> prev;
  for (double tau : {0.2, 0.4, 0.67, 0.8, 1.0}) {
    const auto cur = match_descriptors(t, scene, tau);
    for (const auto& m : prev) EXPECT_NE(std::find(cur.begin(), cur.end(), m), cur.end());
    for (const auto& m : cur) EXPECT_LE(m.d1, m.d2);
    prev = cur;
  }
}

// ---------------------------------------------------------------- homography

TEST(Homography, NoiseFreeRecovery) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 256);
  for (int trial = 0; trial < 20; ++trial) {
    const Homography Hs = planted_h(rng);
    std::vector<Correspondence> c;
    for (int i = 0; i < 30; ++i) {
      const Vec2 s{u(rng), u(rng) * 160 / 256};
      c.push_back({s, *apply(Hs, s)});
    }
    const auto fit = ransac_fit_projective(c, {200, 1.0}, 1);
    EXPECT_LE(max_corner_error(fit.H, Hs, 256, 160), 1e-3);
    EXPECT_EQ(fit.inliers.size(), c.size());
    EXPECT_EQ(fit.H(2, 2), 1.0);
  }
}

TEST(Homography, IdentityCorrespondences) {
  std::vector<Correspondence> c;
  for (int i = 0; i < 10; ++i) c.push_back({{double(i * 13 % 50), double(i * 29 % 37)}, {double(i * 13 % 50), double(i * 29 % 37)}});
  const auto fit = ransac_fit_projective(c, {100, 1.0}, 3);
  EXPECT_TRUE(fit.H.isApprox(Homography::Identity(), 1e-9));
  EXPECT_EQ(fit.inliers.size(), 10u);
}

TEST(Homography, PlantedInliersAmongSixtyPercentOutliers) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0, 256), us(0, 1280), uy(0, 320);
  for (int trial = 0; trial < 10; ++trial) {
    const Homography Hs = planted_h(rng);
    std::vector<Correspondence> c;
    std::vector<std::size_t> truth;
    for (int i = 0; i < 100; ++i) {
      const Vec2 s{ut(rng), ut(rng) * 160 / 256};
      if (i % 5 < 2) {
        truth.push_back(c.size());
        c.push_back({s, *apply(Hs, s)});
      } else {
        Vec2 d;
        do d = {us(rng), uy(rng)};
        while (std::hypot(d.x - apply(Hs, s)->x, d.y - apply(Hs, s)->y) <= 10);
        c.push_back({s, d});
      }
    }
    const auto fit = ransac_fit_projective(c, {1000, 3.0}, 42);
    EXPECT_EQ(fit.inliers, truth);
    EXPECT_LE(max_corner_error(fit.H, Hs, 256, 160), 1e-3);
    EXPECT_GE(static_cast<int>(fit.inliers.size()), fit.best_hypothesis_inliers);
    const auto again = ransac_fit_projective(c, {1000, 3.0}, 42);
    EXPECT_EQ(again.inliers, fit.inliers);
    EXPECT_EQ(again.H, fit.H);
  }
}

TEST(Homography, EqualSupportGoesToSmallerResidual) {
  // Six exact identity matches and six noisy matches of a translation: both hypotheses gather
  // six inliers, the exact one must win for every seed.
  std::vector<Correspondence> c;
  const double jitter[] = {1.5, -1.2, 1.1, -1.4, 1.3, -1.0};
  for (int i = 0; i < 6; ++i) {
    const Vec2 s{20.0 + 37 * i, 15.0 + 23 * ((i * 5) % 7)};
    c.push_back({s, s});
  }
  for (int i = 0; i < 6; ++i) {
    const Vec2 s{30.0 + 29 * i, 200.0 + 31 * ((i * 3) % 5)};
    c.push_back({s, {s.x + 400 + jitter[i], s.y + jitter[5 - i]}});
  }
  const std::vector<std::size_t> exact{0, 1, 2, 3, 4, 5};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto fit = ransac_fit_projective(c, {500, 3.0}, seed);
    ASSERT_EQ(fit.inliers, exact) << seed;
    EXPECT_TRUE(fit.H.isApprox(Homography::Identity(), 1e-9));
  }
}

TEST(Homography, TooFewMatches) {
  const std::vector<Correspondence> c(3);
  try {
    ransac_fit_projective(c, {}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::insufficient_matches);
  }
}

TEST(GeomCheck, IdentityAccepted) {
  for (std::size_t n : {8u, 9u, 500u}) {
    const auto r = check_geom_consistency(Homography::Identity(), n, 256, 160, 1280, 320);
    EXPECT_TRUE(r.accepted);
    EXPECT_EQ(r.p_bbox, (BBox{0, 0, 256, 160}));
  }
  EXPECT_FALSE(check_geom_consistency(Homography::Identity(), 7, 256, 160, 1280, 320).accepted);
}

TEST(GeomCheck, ReflectionRejected) {
  Homography H;
  H << -1, 0, 600, 0, 1, 50, 0, 0, 1;
  EXPECT_FALSE(check_geom_consistency(H, 50, 256, 160, 1280, 320).accepted);
}

TEST(GeomCheck, AbsurdScaleRejected) {
  Homography H;
  H << 5, 0, 0, 0, 5, 0, 0, 0, 1;
  const auto r = check_geom_consistency(H, 50, 100, 40, 2000, 2000);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.reason, "area ratio out of range");
  H << 0.4, 0, 0, 0, 0.4, 0, 0, 0, 1;
  EXPECT_FALSE(check_geom_consistency(H, 50, 100, 40, 2000, 2000).accepted);
}

TEST(GeomCheck, FoldOverAndOffFrameRejected) {
  Homography fold;
  fold << 1, 0, 0, 0, 1, 0, -0.006, 0, 1;  // far corners cross the horizon
  EXPECT_FALSE(check_geom_consistency(fold, 50, 256, 160, 1280, 320).accepted);
  Homography off;
  off << 1, 0, 1300, 0, 1, 0, 0, 0, 1;
  EXPECT_FALSE(check_geom_consistency(off, 50, 256, 160, 1280, 320).accepted);
  off(0, 2) = 1024 + 100;  // right corners 100 px past the edge, inside the 128 px margin
  EXPECT_TRUE(check_geom_consistency(off, 50, 256, 160, 1280, 320).accepted);
}

// ---------------------------------------------------------------- detection

GrayImage paste_fixture(int px, int py, double gain) {
  synth::ScenarioSpec spec;
  spec.seed = 77;
  spec.pantograph.present = false;
  GrayImage scene = synth::render_roof_scene(spec).image;
  scene.paste(synth::pantograph_template(), px, py);
  for (auto& v : scene.pixels()) v = static_cast<std::uint8_t>(std::clamp(std::lround(v * gain), 0L, 255L));
  return scene;
}

TEST(Detect, PastedTemplateFound) {
  const auto scene = paste_fixture(700, 90, 1.0);
  const auto d = detect_pantograph(scene, template_model(), {}, 3);
  ASSERT_TRUE(d.found) << d.reason;
  EXPECT_GE(iou(d.p_bbox, {700, 90, 256, 160}), 0.8);
}

TEST(Detect, RandomTextureNotFound) {
  std::mt19937_64 rng(12);
  GrayImage noise(1024, 320);
  for (auto& v : noise.pixels()) v = static_cast<std::uint8_t>(rng() & 0xff);
  const auto d = detect_pantograph(noise, template_model(), {}, 3);
  EXPECT_FALSE(d.found);
  EXPECT_TRUE(d.p_bbox.empty());
}

TEST(Detect, BrightnessGainDoesNotFlipResult) {
  for (double g : {0.7, 0.85, 1.15, 1.3}) {
    const auto scene = paste_fixture(300, 100, g);
    std::size_t clipped = 0;
    for (auto v : scene.pixels()) clipped += v == 255;
    ASSERT_LT(clipped * 20, scene.pixels().size());
    EXPECT_TRUE(detect_pantograph(scene, template_model(), {}, 3).found) << g;
  }
}

TEST(Detect, SyntheticRoofPositiveAndNegative) {
  synth::ScenarioSpec spec;
  spec.seed = 5;
  spec.pantograph.shear_deg = 12;
  spec.pantograph.gain = 0.8;
  spec.pantograph.perspective = 2e-4;
  const auto pos = synth::render_roof_scene(spec);
  const auto d = detect_pantograph(pos.image, template_model(), {}, 9);
  ASSERT_TRUE(d.found);
  EXPECT_GE(iou(d.p_bbox, pos.truth), 0.8);
  spec.pantograph.present = false;
  EXPECT_FALSE(detect_pantograph(synth::render_roof_scene(spec).image, template_model(), {}, 9).found);
}

TEST(Detect, ExactAndApproximateIndexAgreeOnFixture) {
  const auto scene = paste_fixture(500, 60, 1.0);
  PantographConfig exact;
  exact.exact_index = true;
  const auto a = detect_pantograph(scene, template_model(), exact, 3);
  const auto b = detect_pantograph(scene, template_model(), {}, 3);
  EXPECT_EQ(a.found, b.found);
  EXPECT_EQ(a.p_bbox, b.p_bbox);
}

TEST(Detect, WindowsCoverScene) {
  PantographConfig cfg;
  const auto w = detection_windows(1280, 320, 256, cfg);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w.front().x, 0);
  EXPECT_EQ(w.back().right(), 1280);
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_LE(w[i].x, w[i - 1].right());
  EXPECT_EQ(detection_windows(300, 320, 256, cfg).size(), 1u);
}

TEST(ModelFile, RoundTripIsExact) {
  const auto& m = template_model();
  std::stringstream buf;
  write_model(buf, m);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 5), "PGFM1");
  EXPECT_EQ(bytes.size(), 5 + 16 + m.keypoints.size() * (24 + 512));
  const auto back = read_model(buf);
  EXPECT_EQ(back.template_w, m.template_w);
  EXPECT_EQ(back.descriptors(), m.descriptors());
  for (std::size_t i = 0; i < m.keypoints.size(); ++i) {
    EXPECT_EQ(back.keypoints[i].x, m.keypoints[i].x);
    EXPECT_EQ(back.keypoints[i].orientation, m.keypoints[i].orientation);
  }
  std::stringstream bad("PGFM2xxxxxxxxxxxxxxxx");
  EXPECT_THROW(read_model(bad), Error);
}

TEST(ModelFile, SetRoundTripAndSingleRecordIsSetOfOne) {
  const auto dir = std::filesystem::temp_directory_path() / ("gate_pgfm_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto set = build_model_set(synth::pantograph_template());
  write_models(dir / "set.pgfm", set);
  const auto back = read_models(dir / "set.pgfm");
  ASSERT_EQ(back.size(), set.size());
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_EQ(back[i].descriptors(), set[i].descriptors());
  write_model(dir / "one.pgfm", template_model());
  EXPECT_EQ(read_models(dir / "one.pgfm").size(), 1u);
  std::filesystem::remove_all(dir);
}

TEST(ModelSet, VariantsScaleStructureAndKeepBackground) {
  const auto t = synth::pantograph_template();
  EXPECT_EQ(template_background(t), synth::kRoofTone);
  const auto v = illumination_variant(t, 0.7);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int a = t.pixels()[i], b = v.pixels()[i];
    if (a == synth::kRoofTone) ASSERT_EQ(b, a);
    else ASSERT_EQ(b, std::clamp(static_cast<int>(std::lround(0.7 * a)), 0, 255));
  }
  EXPECT_EQ(illumination_variant(t, 1.0).pixels()[0], t.pixels()[0]);
  const auto set = build_model_set(t);
  ASSERT_EQ(set.size(), kIlluminationGains.size());
  EXPECT_EQ(set[2].descriptors(), template_model().descriptors());  // gain 1 is the template itself
  for (const auto& m : set) EXPECT_EQ(m.template_w, synth::kTemplateW);
  EXPECT_THROW(build_model_set(t, {}, {}), Error);
  EXPECT_THROW(build_model_set(t, {}, {0.0}), Error);
}

TEST(ModelSet, RepeatedModelAddsNoEvidence) {
  // Every correspondence from the second copy coincides with one from the first.
  const auto scene = paste_fixture(420, 70, 0.9);
  const std::vector<FeatureModel> twice{template_model(), template_model()};
  const auto a = detect_pantograph(scene, template_model(), {}, 5);
  const auto b = detect_pantograph(scene, twice, {}, 5);
  EXPECT_EQ(a.found, b.found);
  EXPECT_EQ(a.inliers, b.inliers);
  EXPECT_EQ(a.matches, b.matches);
  EXPECT_EQ(a.p_bbox, b.p_bbox);
  EXPECT_EQ(a.H, b.H);
}

TEST(ModelSet, DimStructureFoundWithSet) {
  // Low structure gain and strong shear: the gain-1 model alone gathers too little distinct support.
  synth::ScenarioSpec spec;
  spec.seed = 101;
  spec.pantograph.shear_deg = -11.6;
  spec.pantograph.gain = 0.71;
  spec.pantograph.perspective = -1.2e-4;
  spec.pantograph.position = 0.48;
  const auto scene = synth::render_roof_scene(spec);
  static const auto set = build_model_set(synth::pantograph_template());
  const auto d = detect_pantograph(scene.image, set, {}, spec.seed);
  ASSERT_TRUE(d.found) << d.reason;
  EXPECT_GE(iou(d.p_bbox, scene.truth), 0.8);
  EXPECT_GE(d.inliers, PantographConfig{}.geom.min_inliers);
}

TEST(ModelSet, MixedTemplateSizesRejected) {
  const auto small = build_model(synth::pantograph_template().crop({0, 0, 200, 120}));
  const std::vector<FeatureModel> mixed{template_model(), small};
  EXPECT_THROW(detect_pantograph(GrayImage(300, 200, 50), mixed), Error);
}

}  // namespace
}  // namespace gate::pantograph
