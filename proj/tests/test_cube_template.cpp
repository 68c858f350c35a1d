#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cubehom/cube_template.hpp"
#include "cubehom/errors.hpp"
#include "oracle.hpp"

using namespace cubehom;

namespace {

using Indices = std::vector<CubeVertexIndex>;

std::size_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

bool is_permutation_of_range(std::span<const CubeVertexIndex> p) {
    std::vector<bool> seen(p.size(), false);
    for (auto v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

// Vertex m of the cube as its coordinate vector, then the group element
// applied directly from its definition.
CubeVertexIndex image_by_definition(CubeVertexIndex v, const GroupElement& g, int n) {
    CubeVertexIndex out = 0;
    for (int i = 1; i <= n; ++i) {
        int x = oracle::coord(v, g.perm[i - 1]);
        if (g.reversal[i - 1] < 0) x = 1 - x;
        out |= static_cast<CubeVertexIndex>(x) << (i - 1);
    }
    return out;
}

}  // namespace

TEST_SUITE("cube_template") {

TEST_CASE("face lists for n = 1, 2, 3") {
    const auto f1 = build_face_list(1);
    REQUIRE(f1.entries.size() == 1);
    CHECK(f1.entries[0].neg == Indices{0});
    CHECK(f1.entries[0].pos == Indices{1});

    const auto f2 = build_face_list(2);
    CHECK(f2.entries[0].neg == Indices{0, 2});
    CHECK(f2.entries[0].pos == Indices{1, 3});
    CHECK(f2.entries[1].neg == Indices{0, 1});
    CHECK(f2.entries[1].pos == Indices{2, 3});

    const auto f3 = build_face_list(3);
    CHECK(f3.entries[2].neg == Indices{0, 1, 2, 3});
    CHECK(f3.entries[2].pos == Indices{4, 5, 6, 7});
}

TEST_CASE("face lists match the coordinate definition and partition the cube") {
    for (int n = 1; n <= 6; ++n) {
        const auto f = build_face_list(n);
        const std::size_t size = std::size_t{1} << n;
        for (int i = 1; i <= n; ++i) {
            Indices neg, pos;
            for (CubeVertexIndex m = 0; m < size; ++m) (oracle::coord(m, i) ? pos : neg).push_back(m);
            CHECK(f.entries[i - 1].neg == neg);
            CHECK(f.entries[i - 1].pos == pos);
            std::set<CubeVertexIndex> all(neg.begin(), neg.end());
            all.insert(pos.begin(), pos.end());
            CHECK(all.size() == size);
        }
    }
}

TEST_CASE("faces_of") {
    const std::vector<VertexId> edge{7, 9};
    const auto e = faces_of(edge, build_face_list(1));
    REQUIRE(e.size() == 1);
    CHECK(e[0].first == std::vector<VertexId>{7});
    CHECK(e[0].second == std::vector<VertexId>{9});

    const std::vector<VertexId> sq{10, 11, 12, 13};
    const auto s = faces_of(sq, build_face_list(2));
    CHECK(s[0].first == std::vector<VertexId>{10, 12});
    CHECK(s[0].second == std::vector<VertexId>{11, 13});
    CHECK(s[1].first == std::vector<VertexId>{10, 11});
    CHECK(s[1].second == std::vector<VertexId>{12, 13});

    const std::vector<VertexId> constant{4, 4, 4, 4};
    for (const auto& [neg, pos] : faces_of(constant, build_face_list(2))) {
        CHECK(neg == std::vector<VertexId>{4, 4});
        CHECK(pos == std::vector<VertexId>{4, 4});
    }
    CHECK_THROWS_AS(faces_of(edge, build_face_list(2)), InputError);
}

TEST_CASE("group sizes and identity first") {
    for (int n = 0; n <= 5; ++n) {
        const auto group = generate_group(n);
        CHECK(group.size() == (std::size_t{1} << n) * factorial(n));
        for (int i = 0; i < n; ++i) {
            CHECK(group.front().perm[i] == i + 1);
            CHECK(group.front().reversal[i] == 1);
        }
        CHECK(group.front().sign == 1);
        std::set<std::pair<std::vector<int>, std::vector<int>>> distinct;
        for (const auto& g : group) distinct.insert({g.perm, g.reversal});
        CHECK(distinct.size() == group.size());
    }
}

TEST_CASE("group signs") {
    const auto g1 = generate_group(1);
    REQUIRE(g1.size() == 2);
    CHECK(g1[0].sign == 1);
    CHECK(g1[1].sign == -1);

    const auto g2 = generate_group(2);
    CHECK(std::count_if(g2.begin(), g2.end(), [](const auto& g) { return g.sign == 1; }) == 4);
    CHECK(std::count_if(g2.begin(), g2.end(), [](const auto& g) { return g.sign == -1; }) == 4);

    for (int n = 1; n <= 4; ++n)
        for (const auto& g : generate_group(n)) {
            int inversions = 0;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) inversions += g.perm[a] > g.perm[b];
            int s = inversions % 2 ? -1 : 1;
            for (int r : g.reversal) s *= r;
            CHECK(g.sign == s);
            CHECK(permutation_sign(g.perm) == (inversions % 2 ? -1 : 1));
        }
}

TEST_CASE("vertex_image") {
    const GroupElement id{{1, 2}, {1, 1}, 1};
    for (CubeVertexIndex v = 0; v < 4; ++v) CHECK(vertex_image(v, id, 2) == v);
    const GroupElement flip{{1, 2}, {-1, -1}, 1};
    CHECK(vertex_image(0, flip, 2) == 3);
    const GroupElement swap{{2, 1}, {1, 1}, -1};
    CHECK(vertex_image(1, swap, 2) == 2);
    for (int n = 1; n <= 4; ++n)
        for (const auto& g : generate_group(n))
            for (CubeVertexIndex v = 0; v < (1U << n); ++v) CHECK(vertex_image(v, g, n) == image_by_definition(v, g, n));
}

TEST_CASE("action table for n = 1") {
    const auto t = build_action_table(1);
    REQUIRE(t.size() == 2);
    CHECK(Indices(t.index_perm(0).begin(), t.index_perm(0).end()) == Indices{0, 1});
    CHECK(t.sign(0) == 1);
    CHECK(Indices(t.index_perm(1).begin(), t.index_perm(1).end()) == Indices{1, 0});
    CHECK(t.sign(1) == -1);
}

TEST_CASE("action tables are faithful permutation representations") {
    for (int n = 0; n <= 5; ++n) {
        const auto t = build_action_table(n);
        CHECK(t.size() == (std::size_t{1} << n) * factorial(n));
        CHECK(t.sign(0) == 1);
        for (std::size_t m = 0; m < t.cube_size(); ++m) CHECK(t.index_perm(0)[m] == m);
        std::set<Indices> images;
        for (std::size_t r = 0; r < t.size(); ++r) {
            const auto p = t.index_perm(r);
            CHECK(is_permutation_of_range(p));
            images.emplace(p.begin(), p.end());
        }
        CHECK(images.size() == t.size());
        const auto neg = t.negative_rows();
        CHECK(neg.size() == (n == 0 ? 0 : t.size() / 2));
    }
}

TEST_CASE("sign is a homomorphism") {
    for (int n = 1; n <= 3; ++n) {
        const auto t = build_action_table(n);
        std::map<Indices, int> sign_of;
        for (std::size_t r = 0; r < t.size(); ++r) sign_of.emplace(Indices(t.index_perm(r).begin(), t.index_perm(r).end()), t.sign(r));
        for (std::size_t a = 0; a < t.size(); ++a)
            for (std::size_t b = 0; b < t.size(); ++b) {
                const auto pa = t.index_perm(a);
                const auto pb = t.index_perm(b);
                Indices composed(t.cube_size());
                for (std::size_t m = 0; m < composed.size(); ++m) composed[m] = pa[pb[m]];
                const auto it = sign_of.find(composed);
                REQUIRE(it != sign_of.end());
                CHECK(it->second == t.sign(a) * t.sign(b));
            }
    }
}

TEST_CASE("action table matches the group element definition") {
    for (int n = 1; n <= 3; ++n) {
        const auto group = generate_group(n);
        const auto t = build_action_table(n);
        REQUIRE(group.size() == t.size());
        // The precomposition reading sigma(A)[m] = A[g(m)] must be consistent
        // with some element, and signs must agree row by row.
        for (std::size_t r = 0; r < t.size(); ++r) {
            CHECK(t.sign(r) == group[r].sign);
            const auto p = t.index_perm(r);
            bool forward = true, inverse = true;
            for (CubeVertexIndex m = 0; m < t.cube_size(); ++m) {
                forward &= p[m] == vertex_image(m, group[r], n);
                inverse &= vertex_image(p[m], group[r], n) == m;
            }
            CHECK((forward || inverse));
        }
    }
}

TEST_CASE("negative_rows_from") {
    for (int n = 1; n <= 4; ++n) {
        const auto t = build_action_table(n);
        std::size_t total = 0;
        for (CubeVertexIndex p = 0; p < t.cube_size(); ++p)
            for (int k = 0; k < std::max(n, 1); ++k)
                for (auto row : t.negative_rows_from(p, k)) {
                    CHECK(t.sign(row) == -1);
                    CHECK(t.index_perm(row)[0] == p);
                    if (n > 1) CHECK(t.index_perm(row)[1] == (p ^ (1U << k)));
                    ++total;
                }
        CHECK(total == t.negative_rows().size());
    }
}

TEST_CASE("orbit_of") {
    const auto t1 = build_action_table(1);
    const std::vector<VertexId> ab{3, 8};
    const auto o = orbit_of(ab, t1);
    REQUIRE(o.size() == 2);
    CHECK(o[0] == std::pair<std::vector<VertexId>, int>{{3, 8}, 1});
    CHECK(o[1] == std::pair<std::vector<VertexId>, int>{{8, 3}, -1});

    const auto t2 = build_action_table(2);
    const std::vector<VertexId> constant{5, 5, 5, 5};
    const auto oc = orbit_of(constant, t2);
    for (std::size_t r = 0; r < oc.size(); ++r) {
        CHECK(oc[r].first == constant);
        CHECK(oc[r].second == t2.sign(r));
    }
    const std::vector<VertexId> injective{0, 1, 2, 3};
    const auto oi = orbit_of(injective, t2);
    CHECK(oi.front().first == injective);
    CHECK(oi.front().second == 1);
    std::set<std::vector<VertexId>> distinct;
    for (const auto& e : oi) distinct.insert(e.first);
    CHECK(distinct.size() == 8);
}

TEST_CASE("cube_template cache") {
    const auto a = cube_template(3);
    const auto b = cube_template(3);
    CHECK(a.get() == b.get());
    CHECK(a->faces.n == 3);
    CHECK(a->action.n() == 3);
}

}
