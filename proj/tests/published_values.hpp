#pragma once

// Published decompositions: target expression, basis and the
// printed coefficients (zeros where the display omits a basis element).

#include <string>
#include <vector>

namespace qmf::testdata {

struct PublishedDecomposition {
  std::string name;
  std::string target;
  std::vector<std::string> basis;
  std::vector<std::string> coefficients;
};

inline std::vector<std::string> lahiri_level1_basis() {
  std::vector<std::string> b{"Delta", "D(Delta)"};
  for (int i = 1; i <= 7; ++i)
    for (int j = 0; j <= 7 - i; ++j) {
      const std::string e = "E(" + std::to_string(2 * i) + ")";
      b.push_back(j == 0 ? e : j == 1 ? "D(" + e + ")" : "D^" + std::to_string(j) + "(" + e + ")");
    }
  return b;
}

inline std::vector<std::string> lahiri_level1_coefficients() {
  std::vector<std::string> c(lahiri_level1_basis().size(), "0");
  auto set = [&](const std::string& e, const std::string& v) {
    const auto b = lahiri_level1_basis();
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b[i] == e) c[i] = v;
  };
  set("Delta", "-8/35");
  set("D(Delta)", "8/35");
  set("D^3(E(2))", "-2");
  set("D^4(E(2))", "18");
  set("D^5(E(2))", "-216/5");
  set("D^6(E(2))", "144/5");
  set("D^2(E(4))", "-1/5");
  set("D^3(E(4))", "12/5");
  set("D^4(E(4))", "-234/35");
  set("D^5(E(4))", "171/35");
  set("D^2(E(6))", "2/7");
  set("D^3(E(6))", "-9/7");
  set("D^4(E(6))", "25/21");
  set("D^2(E(8))", "-1/6");
  set("D^3(E(8))", "4/15");
  set("D^2(E(10))", "2/55");
  return c;
}

inline std::vector<PublishedDecomposition> h_decompositions() {
  return {
      {"H2", "E(2)*E(2,2)", {"E(4)", "E(4,2)", "D(phi(1,2))", "D(E(2))"}, {"1/5", "4/5", "3", "6"}},
      {"H3", "E(2)*E(2,3)", {"E(4)", "E(4,3)", "D(phi(1,3))", "D(E(2))"}, {"1/10", "9/10", "4", "4"}},
      {"H5", "E(2)*E(2,5)", {"E(4)", "E(4,5)", "Delta_4_5", "D(phi(1,5))", "D(E(2))"},
       {"1/26", "25/26", "-288/65", "24/5", "12/5"}},
      {"H6", "E(2)*E(2,6)",
       {"E(4)", "E(4,2)", "E(4,3)", "E(4,6)", "Delta_4_6", "D(phi(1,2))", "D(phi(1,3))", "D(phi(3,6))", "D(E(2))"},
       {"1/50", "2/25", "9/50", "18/25", "-24/5", "0", "2", "3", "2"}},
      {"H7", "E(2)*E(2,7)", {"E(4)", "E(4,7)", "Delta_4_7", "D(phi(1,7))", "D(E(2))"},
       {"1/50", "49/50", "-288/35", "36/7", "12/7"}},
      {"H8", "E(2)*E(2,8)",
       {"E(4)", "E(4,2)", "E(4,4)", "E(4,8)", "Delta_4_8", "D(phi(1,4))", "D(phi(1,8))", "D(rescale(phi(1,4),2))",
        "D(E(2))"},
       {"1/80", "3/80", "3/20", "4/5", "-9", "0", "21/4", "0", "3/2"}},
      {"H9", "E(2)*E(2,9)",
       {"E(4)", "twist(E(4),chi3)", "E(4,3)", "E(4,9)", "Delta_4_9", "D(phi(1,3))", "D(twist(phi(1,3),chi3))",
        "D(phi(1,9))", "D(E(2))"},
       {"1/90", "0", "4/45", "9/10", "-32/3", "0", "0", "16/3", "4/3"}},
      {"H10", "E(2)*E(2,10)",
       {"E(4)", "E(4,2)", "E(4,5)", "E(4,10)", "nf(4.10)", "Delta_4_5", "F_4_5_2", "D(phi(1,10))", "D(phi(1,5))",
        "D(rescale(phi(1,5),2))", "D(E(2))"},
       {"1/130", "2/65", "5/26", "10/13", "-24/5", "-432/65", "-1728/65", "27/5", "0", "0", "6/5"}},
      {"H11", "E(2)*E(2,11)",
       {"E(4)", "E(4,11)", "nf(4.11.1)", "nf(4.11.2)", "D(phi(1,11))", "D(Delta_2_11)", "D(E(2))"},
       {"1/122", "121/122", "-4128/671+-192/671*t@(2,2)", "-4512/671+192/671*t@(2,2)", "60/11", "0", "12/11"}},
      {"H13", "E(2)*E(2,13)", {"E(4)", "E(4,13)", "nf(4.13.1)", "nf(4.13.2)", "nf(4.13.3)", "D(phi(1,13))", "D(E(2))"},
       {"1/170", "169/170", "0", "-1728/221+288/221*t@(1,4)", "-1440/221+-288/221*t@(1,4)", "72/13", "12/13"}},
      {"H14", "E(2)*E(2,14)",
       {"E(4)", "E(4,2)", "E(4,7)", "E(4,14)", "Delta_4_7", "F_4_7_2", "nf(4.14.1)", "nf(4.14.2)", "D(phi(1,7))",
        "D(phi(1,14))", "D(phi(2,14))", "D(Delta_2_14)", "D(E(2))"},
       {"1/250", "2/125", "49/250", "98/125", "-864/175", "-3456/175", "-48/7", "-72/25", "0", "39/7", "0", "0",
        "6/7"}},
  };
}

inline std::vector<PublishedDecomposition> twisted_decompositions() {
  const std::vector<std::string> b{"E(4)",        "twist(E(4),chi3)", "E(4,3)",
                                   "E(4,9)",      "Delta_4_9",        "D(phi(1,3))",
                                   "D(twist(phi(1,3),chi3))", "D(phi(1,9))", "D(E(2))"};
  return {
      {"S03", "E(2)^2-E(2)*twist(E(2),chi0_3)", b, {"11/30", "0", "10/3", "-27/10", "32", "16", "0", "-16", "12"}},
      {"S13", "1/2*E(2)*(twist(E(2),chi0_3)+twist(E(2),chi3))", b,
       {"19/60", "1/20", "-5/3", "27/20", "32", "-8", "-6", "8", "0"}},
  };
}

inline std::vector<PublishedDecomposition> level12_decompositions() {
  const std::vector<std::string> w6{"E(6)", "E(6,2)", "D(E(4))", "D(E(4,2))"};
  const std::vector<std::string> w8{"E(8)", "E(8,2)", "Delta_8_2", "D(E(6))", "D(E(6,2))"};
  return {
      {"E2E4", "E(2)*E(4)", {"E(6)", "D(E(4))"}, {"1", "3"}},
      {"E2E4_2", "E(2)*E(4,2)", w6, {"1/21", "20/21", "0", "3"}},
      {"E4E2_2", "E(4)*E(2,2)", w6, {"5/21", "16/21", "3/2", "0"}},
      {"E2E6", "E(2)*E(6)", {"E(8)", "D(E(6))"}, {"1", "2"}},
      {"E2_2E6", "E(2,2)*E(6)", w8, {"21/85", "64/85", "-2016/17", "1", "0"}},
      {"E2E6_2", "E(2)*E(6,2)", w8, {"1/85", "84/85", "-504/17", "0", "2"}},
  };
}

inline std::vector<PublishedDecomposition> lahiri_decompositions() {
  return {
      {"triple", "(E(2)-1)*D(E(2))^2",
       {"E(8)", "D(E(6))", "D^2(E(4))", "D^3(E(2))", "E(10)", "D(E(8))", "D^2(E(6))", "D^3(E(4))", "D^4(E(2))"},
       {"0", "0", "-1/5", "-2", "0", "0", "2/21", "4/5", "6"}},
      {"quintuple", "(E(2)-1)^3*D(E(2))^2", lahiri_level1_basis(), lahiri_level1_coefficients()},
  };
}

inline std::vector<PublishedDecomposition> newform_combinations() {
  const std::vector<std::string> b14{"Delta_4_7", "F_4_7_2", "Delta_2_14^2", "Delta_2_14*phi(1,14)"};
  const std::vector<std::string> b10{"Delta_6_5", "F_6_5_2", "F_10", "F1_10", "F2_10"};
  const std::vector<std::string> b5{"G1", "G2", "G3"};
  return {
      {"4141", "nf(4.14.1)", b14, {"-9/4", "-9", "6", "13/4"}},
      {"4142", "nf(4.14.2)", b14, {"1", "4", "-5", "0"}},
      {"dss1", "nf(6.10.1)", b10, {"-1", "16", "1", "0", "1/4"}},
      {"dss2", "nf(6.10.2)", b10, {"-4/3", "8", "7/8", "-7/24", "0"}},
      {"dss3", "nf(6.10.3)", b10, {"-1/3", "-16", "0", "1/3", "-1/4"}},
      {"est1", "nf(8.5.1)", b5, {"16/3", "22/3", "-1/3"}},
      {"est2", "nf(8.5.2)", b5, {"12+-1*t@(20,-24)", "1", "0"}},
      {"est3", "nf(8.5.3)", b5, {"-8+1*t@(20,-24)", "1", "0"}},
  };
}

}  // namespace qmf::testdata
