#include <qmf/identities.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace qmf;

namespace {

const IdentitySpec& id(const std::string& name) { return find_identity(name); }

}  // namespace

TEST(Catalog, LoadsAllRecords) {
  const auto& cat = catalog();
  EXPECT_EQ(cat.size(), 27u);
  std::set<std::string> ids;
  for (const auto& s : cat) ids.insert(s.id);
  EXPECT_EQ(ids.size(), cat.size());
  for (const std::string want : {"thm1.W1", "thm1.W10", "onze.W11", "treize.W13", "quatorze.W14", "thm2.S23",
                                 "thm3.6", "thm4.quintuple", "prop1721", "prop1715"})
    EXPECT_TRUE(ids.count(want)) << want;
  EXPECT_THROW(find_identity("thm9.nope"), std::out_of_range);
}

TEST(Catalog, Examples) {
  const IdentitySpec& w5 = id("thm1.W5");
  EXPECT_EQ(w5.lhs.kind, SumDescriptor::Kind::W);
  const auto tau = std::find_if(w5.rhs.begin(), w5.rhs.end(), [](const RHSTerm& t) { return t.is_tau(); });
  ASSERT_NE(tau, w5.rhs.end());
  EXPECT_EQ(tau->scalar, FieldElement(make_rational(-1, 130)));
  EXPECT_EQ(tau->label, "4.5");

  const IdentitySpec& p = id("prop1715");
  EXPECT_EQ(p.lhs.kind, SumDescriptor::Kind::Lahiri);
  EXPECT_EQ(p.lhs_scalar, 576);
  std::vector<std::string> d;
  for (const auto& t : p.rhs)
    if (t.group == "D") d.push_back(t.scalar.str());
  EXPECT_EQ(d, (std::vector<std::string>{"792/475+12/475*t@(20,-24)", "1032/475+-12/475*t@(20,-24)"}));

  const IdentitySpec& t31 = id("thm3.1");
  ASSERT_EQ(t31.rhs.size(), 4u);
  EXPECT_EQ(t31.rhs[0].scalar, FieldElement(make_rational(7, 80)));
  EXPECT_EQ(t31.rhs[0].j, 5);
  EXPECT_EQ(t31.rhs[1].kind, RHSTerm::Kind::NSigma);
}

TEST(Catalog, FixtureLabels) {
  EXPECT_EQ(fixture_label("tau_4_11_1"), "4.11.1");
  EXPECT_EQ(fixture_label("tau_4_7"), "4.7");
}

TEST(EvaluateRHS, Examples) {
  EXPECT_EQ(evaluate_rhs(id("thm1.W1"), 3), FieldElement(6));
  EXPECT_EQ(evaluate_rhs(id("thm1.W5"), 1), FieldElement(0));
  EXPECT_THROW(evaluate_rhs(id("thm1.W1"), 0), std::invalid_argument);
}

TEST(EvaluateRHS, QuadraticPartIsATrace) {
  const IdentitySpec& w11 = id("onze.W11");
  const NewformRegistry& reg = NewformRegistry::shared();
  for (long n = 1; n <= 60; ++n) {
    FieldElement part(0);
    const RHSTerm* first = nullptr;
    for (const auto& t : w11.rhs)
      if (t.is_tau()) {
        part += t.scalar * evaluate_term(t, n, reg);
        if (!first) first = &t;
      }
    ASSERT_NE(first, nullptr);
    const FieldElement x = first->scalar * evaluate_term(*first, n, reg);
    EXPECT_EQ(part, x + x.conj()) << n;
    EXPECT_TRUE(part.is_rational());
  }
}

TEST(Verify, Examples) {
  EXPECT_TRUE(verify(id("thm1.W7"), 500).ok());
  EXPECT_TRUE(verify(id("thm2.S03"), 300).ok());
  const VerifyReport q = verify(id("thm4.quintuple"), 100);
  EXPECT_TRUE(q.ok());
  EXPECT_EQ(q.passed, 100);
}

TEST(Verify, ResidueClassesSumToW1) {
  const IdentitySpec &s0 = id("thm2.S03"), &s1 = id("thm2.S13"), &s2 = id("thm2.S23"), &w1 = id("thm1.W1");
  for (long n = 1; n <= 300; ++n)
    EXPECT_EQ(evaluate_rhs(s0, n) + evaluate_rhs(s1, n) + evaluate_rhs(s2, n), evaluate_rhs(w1, n)) << n;
}

TEST(Verify, CatalogTracePairsAreConsistent) {
  for (const auto& s : catalog()) EXPECT_FALSE(check_trace_pairs(s).has_value()) << s.id;
}

TEST(Verify, UnpairedQuadraticScalarIsRejected) {
  IdentitySpec bad = id("onze.W11");
  for (auto& t : bad.rhs)
    if (t.label == "4.11.2") t.scalar = t.scalar.conj() + FieldElement(1);
  const auto msg = check_trace_pairs(bad);
  ASSERT_TRUE(msg.has_value());
  const VerifyReport r = verify(bad, 20);
  EXPECT_FALSE(r.ok());

  IdentitySpec swapped = id("onze.W11");
  for (auto& t : swapped.rhs)
    if (t.is_tau()) t.label = "4.11.1";
  EXPECT_FALSE(verify(swapped, 20).ok());
}

TEST(Verify, WrongCoefficientIsReported) {
  IdentitySpec bad = id("thm1.W2");
  bad.rhs[0].scalar += FieldElement(make_rational(1, 1000));
  const VerifyReport r = verify(bad, 30);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.failures.front().n, 1);
  EXPECT_EQ(r.passed + static_cast<long>(r.failures.size()), 30);
}

TEST(Verify, IndependentOfJobCount) {
  IdentitySpec bad = id("thm1.W3");
  bad.rhs.back().scalar *= FieldElement(2);
  for (const IdentitySpec* s : std::vector<const IdentitySpec*>{&id("thm3.4"), &bad}) {
    const VerifyReport a = verify(*s, 150, 1), b = verify(*s, 150, 4);
    EXPECT_EQ(a.json().dump(), b.json().dump()) << s->id;
  }
}

TEST(Serialization, RoundTrip) {
  for (const auto& s : catalog()) {
    const nlohmann::json j = identity_to_json(s);
    const IdentitySpec back = identity_from_json(j);
    EXPECT_EQ(identity_to_json(back), j) << s.id;
    EXPECT_EQ(back.rhs.size(), s.rhs.size());
  }
}

TEST(Serialization, RejectsMalformedRecords) {
  EXPECT_THROW(detail::term_from_json(nlohmann::json{{"kind", "bogus"}, {"c", "1"}}), std::invalid_argument);
  EXPECT_THROW(SumDescriptor::lahiri({0}, {2}, {1}), std::invalid_argument);

  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "qmf_dup_catalog.json").string();
  nlohmann::json rec = identity_to_json(id("thm1.W1"));
  std::ofstream(path) << nlohmann::json{{"identities", nlohmann::json::array({rec, rec})}}.dump();
  EXPECT_THROW(load_catalog(path), std::invalid_argument);
  std::filesystem::remove(path);
}
