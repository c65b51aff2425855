#include <catch2/catch_amalgamated.hpp>

#include "nforge/double.hpp"
#include "support.hpp"

#include <random>

using namespace nforge;
using namespace nftest;

TEST_CASE("engine dimensions") {
    DoubleEngine sw = build_engine(sweedler_datum());
    CHECK(sw.dimension() == 16);  // 2 * 4 * 2
    CHECK_FALSE(sw.truncated());
    CHECK(sw.spec().warnings.empty());

    DoubleEngine fl = build_engine(fl_a1(3));
    CHECK(fl.dimension() == 81);  // 3 * 9 * 3

    // an index pair with tau0(f_1, g_1) = 1 issues the Remark 7.1 warning
    DoubleDatum bad;
    bad.f_group = bad.g_group = GroupSpec{{2}};
    bad.tau0.left = bad.tau0.right = bad.f_group;
    bad.tau0.root_order = 2;
    bad.tau0.exponents = {{1}};
    bad.index.push_back({{1}, {0}});  // tau0(g, 1) = 1
    bad.max_degree = 3;
    DoubleEngine be = build_engine(bad);
    REQUIRE_FALSE(be.spec().warnings.empty());
    CHECK(be.truncated());
}

TEST_CASE("straightening relations") {
    DoubleEngine sw = build_engine(sweedler_datum());
    const auto& d = *sw.spec().source;
    Exponents e{0, 0};

    // eq 3.8: w_1 v_1 = tau0(f_1, g_1) v_1 w_1 + (f_1 g_1 - 1)
    Element lhs = sw.multiply(sw.w_gen(0), sw.v_gen(0));
    Element rhs = sw.scale(sw.multiply(sw.v_gen(0), sw.w_gen(0)),
                           d.tau0.eval(d.index[0].f, d.index[0].g));
    rhs = DoubleEngine::add(rhs, sw.grouplike({1, 1}));
    rhs = DoubleEngine::sub(rhs, sw.one());
    CHECK(lhs == rhs);

    // eq 3.6: g v_1 = tau0(f_1, g) v_1 g
    Element gv = sw.multiply(sw.grouplike({0, 1}), sw.v_gen(0));
    Element vg = sw.scale(sw.multiply(sw.v_gen(0), sw.grouplike({0, 1})),
                          d.tau0.eval(d.index[0].f, {1}));
    CHECK(gv == vg);

    // eq 3.7: w_1 f = tau0(f, g_1) f w_1
    Element wf = sw.multiply(sw.w_gen(0), sw.grouplike({1, 0}));
    Element fw = sw.scale(sw.multiply(sw.grouplike({1, 0}), sw.w_gen(0)),
                          d.tau0.eval({1}, d.index[0].g));
    CHECK(wf == fw);

    // v_1^2 = 0 in the Sweedler engine (Nichols relation)
    CHECK(sw.multiply(sw.v_gen(0), sw.v_gen(0)).empty());
}

TEST_CASE("eq 3.8 round trip for all index pairs") {
    for (auto datum : {fl_a2(3, 6), sweedler_datum()}) {
        DoubleEngine eng = build_engine(datum);
        for (size_t i = 0; i < datum.rank(); ++i)
            for (size_t j = 0; j < datum.rank(); ++j) {
                Element lhs = eng.multiply(eng.w_gen(j), eng.v_gen(i));
                lhs = DoubleEngine::sub(
                    lhs, eng.scale(eng.multiply(eng.v_gen(i), eng.w_gen(j)),
                                   datum.tau0.eval(datum.index[i].f, datum.index[j].g)));
                Element expect;
                if (i == j) {
                    expect = eng.grouplike(datum.fg_element(i));
                    expect = DoubleEngine::sub(expect, eng.one());
                }
                CHECK(lhs == expect);
            }
    }
}

TEST_CASE("associativity, exhaustive on the Sweedler engine") {
    DoubleEngine sw = build_engine(sweedler_datum());
    auto keys = sw.basis();
    for (const auto& a : keys)
        for (const auto& b : keys)
            for (const auto& c : keys) {
                Element ea{{a, Cyc::one(2)}}, eb{{b, Cyc::one(2)}}, ec{{c, Cyc::one(2)}};
                CHECK(sw.multiply(sw.multiply(ea, eb), ec) ==
                      sw.multiply(ea, sw.multiply(eb, ec)));
            }
}

TEST_CASE("coproduct on generators and grouplikes") {
    DoubleEngine sw = build_engine(sweedler_datum());
    // grouplike
    Element fg = sw.grouplike({1, 1});
    TensorElement d1 = sw.coproduct(fg);
    REQUIRE(d1.size() == 1);
    CHECK(d1.begin()->first.first == d1.begin()->first.second);
    // Delta(v_1) = v_1 (x) 1 + f_1 (x) v_1
    TensorElement dv = sw.coproduct(sw.v_gen(0));
    TensorElement expect = sw.tensor_of(sw.v_gen(0), sw.one());
    for (const auto& [k, c] : sw.tensor_of(sw.grouplike({1, 0}), sw.v_gen(0)))
        DoubleEngine::tensor_add(expect, k, c);
    CHECK(dv == expect);
}

TEST_CASE("coassociativity and counit laws, exhaustive at dim 16") {
    DoubleEngine sw = build_engine(sweedler_datum());
    for (const auto& k : sw.basis()) {
        Element a{{k, Cyc::one(2)}};
        TensorElement d = sw.coproduct(a);
        // (Delta x id) Delta = (id x Delta) Delta
        TripleElement lhs, rhs;
        for (const auto& [kk, c] : d) {
            Element left{{kk.first, Cyc::one(2)}};
            for (const auto& [kk2, c2] : sw.coproduct(left))
                DoubleEngine::triple_add(lhs, {kk2.first, kk2.second, kk.second}, c * c2);
            Element right{{kk.second, Cyc::one(2)}};
            for (const auto& [kk2, c2] : sw.coproduct(right))
                DoubleEngine::triple_add(rhs, {kk.first, kk2.first, kk2.second}, c * c2);
        }
        CHECK(lhs == rhs);
        // (eps x id) Delta = id = (id x eps) Delta
        Element left_sum, right_sum;
        for (const auto& [kk, c] : d) {
            if (sw.word_degree(kk.first) == 0)
                left_sum = DoubleEngine::add(left_sum, Element{{kk.second, c}});
            if (sw.word_degree(kk.second) == 0)
                right_sum = DoubleEngine::add(right_sum, Element{{kk.first, c}});
        }
        CHECK(left_sum == a);
        CHECK(right_sum == a);
    }
}

TEST_CASE("Delta is an algebra map") {
    std::mt19937 rng(17);
    DoubleEngine fl = build_engine(fl_a1(3));
    auto keys = fl.basis();
    for (int trial = 0; trial < 40; ++trial) {
        BasisKey a = keys[rng() % keys.size()], b = keys[rng() % keys.size()];
        Element ea{{a, Cyc::one(3)}}, eb{{b, Cyc::one(3)}};
        TensorElement lhs = fl.coproduct(fl.multiply(ea, eb));
        TensorElement rhs = fl.tensor_multiply(fl.coproduct(ea), fl.coproduct(eb));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("associativity on random triples at dim 81") {
    std::mt19937 rng(23);
    DoubleEngine fl = build_engine(fl_a1(3));
    auto keys = fl.basis();
    for (int trial = 0; trial < 60; ++trial) {
        Element a{{keys[rng() % keys.size()], Cyc::one(3)}};
        Element b{{keys[rng() % keys.size()], Cyc::one(3)}};
        Element c{{keys[rng() % keys.size()], Cyc::one(3)}};
        CHECK(fl.multiply(fl.multiply(a, b), c) == fl.multiply(a, fl.multiply(b, c)));
    }
}

TEST_CASE("central grouplikes") {
    // rank-1 FL l=3: C = {(K^a, K^{-a})}, P = <(K, K)>, both of order 3
    auto cd = central_grouplikes(fl_a1(3));
    CHECK(cd.c.order() == 3);
    CHECK(cd.p.order() == 3);
    CHECK(cd.c.contains({1, 2}));
    CHECK(cd.c.contains({2, 1}));

    // Sweedler: C = P = {(1,1), (g,g)}
    auto sw = central_grouplikes(sweedler_datum());
    CHECK(sw.c.order() == 2);
    CHECK(sw.c == sw.p);
}

TEST_CASE("thm 4.2 report") {
    // rank-1 FL l=3
    auto rep = thm42_report(fl_a1(3));
    CHECK(rep.applicable);
    CHECK(rep.sizes_ok);
    CHECK(rep.c_order * rep.p_order == 9);
    CHECK(rep.a_split);
    CHECK(rep.a1_monic);
    CHECK(rep.a1_epic);
    CHECK(rep.a2_monic);
    CHECK(rep.a2_epic);
    CHECK(rep.algebra_map_count == 3);
    CHECK(rep.n_matches_c);

    // A2 FL l=3: hypothesis (4.2) fails
    auto rep2 = thm42_report(fl_a2(3));
    CHECK_FALSE(rep2.hyp_nondegenerate);
    CHECK_FALSE(rep2.applicable);

    // A2 FL l=5: |C||P| = 625
    auto rep3 = thm42_report(fl_a2(5));
    CHECK(rep3.applicable);
    CHECK(rep3.sizes_ok);
    CHECK(rep3.fg_order == 625);
    CHECK(rep3.a1_monic);
    CHECK(rep3.a1_epic);
}

TEST_CASE("prop 4.1 pipeline") {
    DoubleDatum d = fl_a1(3);
    auto witness = find_retraction(d);
    REQUIRE(witness.has_value());
    auto rep = prop41_pipeline(d, *witness);
    CHECK(rep.witness_valid);
    CHECK(rep.dim_d == 81);
    CHECK(rep.dim_target == 81);  // 3 * 27
    CHECK(rep.bijective);

    // invalid witness: a retraction that does not kill P
    RetractionWitness badwit = *witness;
    // send the generator of (F x G)/P to a non-identity central element
    badwit.rho.images.assign(badwit.rho.images.size(), Exponents{1, 2});
    auto bad = prop41_pipeline(d, badwit);
    if (!bad.witness_valid) {
        CHECK(bad.violated_index.has_value());
    } else {
        // the altered map may still kill P; then it must remain bijective
        CHECK(bad.bijective);
    }
}

TEST_CASE("cor 4.3 equivalences") {
    struct Case {
        const char* type;
        std::int64_t l;
        bool expect;
    };
    // det A1 = 2, det A2 = 3, det B2 = 2, det A3 = 4
    std::vector<Case> cases{{"A1", 3, true},  {"A1", 5, true},  {"A1", 7, true},
                            {"A2", 3, false}, {"A2", 5, true},  {"A2", 7, true},
                            {"B2", 3, true},  {"B2", 5, true},
                            {"A3", 3, true},  {"A3", 5, true}};
    for (const auto& c : cases) {
        auto rep = cor43_report(cartan_matrix(c.type), c.l);
        INFO(c.type << " l=" << c.l);
        CHECK(rep.all_agree);
        CHECK(rep.t_equals_c == c.expect);
        CHECK(rep.l_prime_to_det == (std::gcd(c.l, rep.cartan_det) == 1));
    }
    CHECK(cartan_matrix("A2").det() == 3);
    CHECK(cartan_matrix("B2").det() == 2);
    CHECK(cartan_matrix("A3").det() == 4);
    CHECK(cartan_matrix("G2").det() == 1);
    CHECK(cartan_matrix("E6").det() == 3);
    CHECK(cartan_matrix("F4").det() == 1);
    CHECK_THROWS_AS(fl_setup(cartan_matrix("A1"), 4), InvalidInput);
    CHECK_THROWS_AS(fl_setup(cartan_matrix("G2"), 9), InvalidInput);
}

TEST_CASE("skew primitive spaces in the Sweedler engine") {
    DoubleEngine sw = build_engine(sweedler_datum());
    // space for (1, f_1) contains v_1
    auto sp = skew_primitive_space(sw, {0, 0}, {1, 0});
    bool found_v = false;
    for (const auto& e : sp.basis)
        if (e == sw.v_gen(0)) found_v = true;
    // v_1 itself may appear in a different basis scaling; check membership
    // by solving: the span must contain v_1
    if (!found_v) {
        // check v_1 is in the span with exact elimination
        auto keys = sw.basis();
        std::map<BasisKey, size_t> index;
        for (const auto& k : keys) index.emplace(k, index.size());
        RowSpace span(keys.size(), 2);
        for (const auto& e : sp.basis) {
            std::vector<Cyc> row(keys.size(), Cyc::zero(2));
            for (const auto& [k, c] : e) row[index.at(k)] = c;
            span.insert(std::move(row));
        }
        std::vector<Cyc> vrow(keys.size(), Cyc::zero(2));
        for (const auto& [k, c] : sw.v_gen(0)) vrow[index.at(k)] = c;
        found_v = span.contains(vrow);
    }
    CHECK(found_v);

    // (g, g) for g = h: only the zero space beyond trivial combinations
    auto sp2 = skew_primitive_space(sw, {1, 1}, {1, 1});
    CHECK(sp2.dim() == 0);

    // total count: sum over pairs of nontrivial dimensions = 2 |I| |Gamma|
    GroupSpec fg = sw.gamma();
    std::int64_t total = 0;
    for (std::int64_t gi = 0; gi < fg.order(); ++gi)
        for (std::int64_t hi = 0; hi < fg.order(); ++hi) {
            auto s = skew_primitive_space(sw, fg.decode(gi), fg.decode(hi));
            std::int64_t trivial = gi == hi ? 0 : 1;  // span of g - h
            total += static_cast<std::int64_t>(s.dim()) - trivial;
        }
    CHECK(total == 2 * 1 * 4);
}

TEST_CASE("skinny quotient engine A(C,0,0)") {
    DoubleDatum d = fl_a1(3);
    auto cd = central_grouplikes(d);
    SkinnyQuotient q = build_engine_mod(d, cd.c);
    CHECK(q.engine.dimension() == 27);  // 3 * 3 * 3
    CHECK(q.engine.gamma().order() == 3);
    // generators of the ideal map to zero: images of c - 1
    for (const auto& c : cd.c.elements) {
        Element img = q.engine.grouplike(q.pres.project(c));
        CHECK(img == q.engine.one());
    }
    // quotient with T trivial returns D itself
    SkinnyQuotient full = build_engine_mod(d, trivial_subgroup(d.product_group()));
    CHECK(full.engine.dimension() == 81);
}
