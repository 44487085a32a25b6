#include <gtest/gtest.h>

#include "largeness/torus_pipeline.hpp"
#include "largeness/verify.hpp"

namespace largeness {
namespace {

Endomorphism endo(const char* text) { return parse_endomorphism(text); }

PeriodicWitness wit(const Endomorphism& e, const char* w, long long i, const char* v, long long k) {
  auto names = e.generator_names();
  auto word = [&](const char* s) { return std::string(s) == "1" ? Word{} : parse_word(s, names); };
  return PeriodicWitness{word(w), i, word(v), k};
}

void expect_sound(const Endomorphism& e, const Verdict& v) {
  auto r = explain_verdict(mapping_torus(e), v);
  EXPECT_TRUE(r.ok) << r.reason;
}

TEST(Pipeline, IdentityF2) {
  auto e = endo("x -> x\ny -> y");
  auto v = torus_pipeline(e, wit(e, "x", 1, "1", 1));
  EXPECT_EQ(v.status, Status::large);
  ASSERT_TRUE(v.certificate);
  EXPECT_TRUE(std::holds_alternative<MappingTorusCover>(v.certificate->value));
  expect_sound(e, v);
}

TEST(Pipeline, Shear) {
  auto e = endo("x -> x\ny -> y x");
  auto v = torus_zz_pipeline(e, wit(e, "x", 1, "1", 1));
  EXPECT_EQ(v.status, Status::large);
  expect_sound(e, v);
  const auto& m = std::get<MappingTorusCover>(v.certificate->value);
  // the first relator of the cover is s w s^-1 w^-1
  EXPECT_EQ(m.images[0], Word::generator(0));
}

TEST(Pipeline, IdentityF1) {
  auto e = endo("x -> x");
  auto v = torus_pipeline(e, wit(e, "x", 1, "1", 1));
  EXPECT_EQ(v.status, Status::not_large_known);
  EXPECT_EQ(std::get<CitedNonLarge>(v.certificate->value).reason, "Z^2");
  expect_sound(e, v);
}

TEST(Pipeline, CubeOnFirstGenerator) {
  auto e = endo("x -> x^3\ny -> y");
  auto v = torus_bs_pipeline(e, wit(e, "x", 1, "1", 3));
  EXPECT_EQ(v.status, Status::large);
  expect_sound(e, v);
  const auto& m = std::get<MappingTorusCover>(v.certificate->value);
  const auto& inner = std::get<AlexanderZero>(m.inner->value);
  EXPECT_EQ(inner.field.name(), "F2");
  EXPECT_EQ(inner.chi(Word::generator(static_cast<int>(m.basis.size()))), 0);
}

TEST(Pipeline, SolubleBaumslagSolitar) {
  auto e = endo("x -> x^3");
  auto v = torus_bs_pipeline(e, wit(e, "x", 1, "1", 3));
  EXPECT_EQ(v.status, Status::not_large_known);
  EXPECT_EQ(std::get<CitedNonLarge>(v.certificate->value).reason, "BS(1,m)");
  expect_sound(e, v);
}

TEST(Pipeline, ExponentTwoIsDoubled) {
  auto e = endo("x -> x^2\ny -> y");
  auto v = torus_bs_pipeline(e, wit(e, "x", 1, "1", 2));
  EXPECT_EQ(v.status, Status::large);
  expect_sound(e, v);
  const auto& m = std::get<MappingTorusCover>(v.certificate->value);
  EXPECT_EQ(m.power % 2, 0);
  EXPECT_EQ(m.images[0], Word::generator(0, 4));
}

TEST(Pipeline, ConjugatedWitnessAndProperPower) {
  // theta(x) = y x y^-1, so theta(x^2) = y x^2 y^-1
  auto e = endo("x -> y x y^-1\ny -> y");
  auto v = torus_zz_pipeline(e, wit(e, "x^2", 1, "y", 1));
  EXPECT_EQ(v.status, Status::large);
  expect_sound(e, v);
}

TEST(Pipeline, InverseWitness) {
  // x -> x^-1: s acts with k = -1, so the pipeline uses the square
  auto e = endo("x -> x^-1\ny -> y");
  auto v = torus_zz_pipeline(e, wit(e, "x", 1, "1", -1));
  EXPECT_EQ(v.status, Status::large);
  expect_sound(e, v);
  EXPECT_EQ(std::get<MappingTorusCover>(v.certificate->value).power % 2, 0);
}

TEST(Pipeline, NonPrimitiveWitness) {
  // [x, y] is not primitive in F_2, only in the finite-index Hall overgroup
  auto e = endo("x -> x\ny -> y");
  auto v = torus_zz_pipeline(e, wit(e, "x y x^-1 y^-1", 1, "1", 1));
  EXPECT_EQ(v.status, Status::large);
  expect_sound(e, v);
  EXPECT_GT(std::get<MappingTorusCover>(v.certificate->value).basis.size(), 2u);
}

TEST(Pipeline, Rejections) {
  auto bad = endo("x -> x\ny -> x");
  EXPECT_THROW(torus_pipeline(bad, wit(bad, "x", 1, "1", 1)), NotInjective);
  auto e = endo("x -> x^2\ny -> y");
  EXPECT_THROW(torus_pipeline(e, wit(e, "x", 1, "1", 1)), std::invalid_argument);
  EXPECT_THROW(torus_zz_pipeline(e, wit(e, "x", 1, "1", 2)), std::invalid_argument);
}

TEST(Pipeline, TamperedCover) {
  auto e = endo("x -> x\ny -> y x");
  auto v = torus_zz_pipeline(e, wit(e, "x", 1, "1", 1));
  ASSERT_EQ(v.status, Status::large);
  auto m = std::get<MappingTorusCover>(v.certificate->value);
  const auto p = mapping_torus(e);
  EXPECT_TRUE(verify_certificate(p, Certificate{m}));

  auto wrong_image = m;
  wrong_image.images.back() = wrong_image.images.back() * Word::generator(0);
  EXPECT_FALSE(verify_certificate(p, Certificate{wrong_image}));

  auto small_basis = m;
  small_basis.basis.pop_back();
  small_basis.images.pop_back();
  EXPECT_FALSE(verify_certificate(p, Certificate{small_basis}));

  EXPECT_FALSE(verify_certificate(mapping_torus(endo("x -> x\ny -> y x^2")), Certificate{m}));

  auto json = to_json(Certificate{m}).dump();
  EXPECT_TRUE(verify_certificate(p, certificate_from_json(Json::parse(json))));
}

}  // namespace
}  // namespace largeness
