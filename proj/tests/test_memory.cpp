#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "core/errors.hpp"
#include "helpers.hpp"
#include "memory/engines.hpp"
#include "memory/store.hpp"

using namespace ltmfair;

namespace {

std::shared_ptr<HashingEmbedder> embedder() {
    return std::make_shared<HashingEmbedder>();
}

InteractionRecord rec(int turn, const std::string& q, const std::string& a) {
    InteractionRecord r;
    r.turn = turn;
    r.query = q;
    r.response = a;
    return r;
}

// Text pool with varied token overlap so cosine scores spread out.
std::vector<std::string> sample_texts(size_t n) {
    const char* stems[] = {
        "thermodynamics entropy question about closed systems",
        "options pricing model with volatile underlying assets",
        "protein folding pathways in cellular biology",
        "supreme court precedent on contract interpretation",
        "graph theory shortest path with negative weights",
        "renaissance painting techniques and pigment chemistry",
        "monetary policy transmission through credit channels",
        "quantum entanglement measurement and locality",
    };
    std::vector<std::string> out;
    for (size_t i = 0; i < n; ++i) {
        out.push_back(std::string(stems[i % 8]) + " variant " + std::to_string(i) +
                      " detail" + std::to_string(i * 7 % 13));
    }
    return out;
}

}  // namespace

TEST_CASE("hashing embedder emits unit vectors deterministically") {
    HashingEmbedder emb;
    CHECK(emb.dim() == kEmbedDim);
    auto v1 = emb.embed("The quick brown Fox");
    auto v2 = emb.embed("THE QUICK brown fox!");  // case and punctuation fold away
    REQUIRE(v1.size() == static_cast<size_t>(kEmbedDim));
    CHECK(v1 == v2);

    double norm2 = 0.0;
    for (float x : v1) norm2 += static_cast<double>(x) * x;
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(cosine(v1, v1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(emb.embed("alpha beta") != emb.embed("gamma delta"));
}

TEST_CASE("empty and token-free input map to the first basis vector") {
    HashingEmbedder emb;
    for (const char* s : {"", "  \t\n", "!!! --- ???"}) {
        auto v = emb.embed(s);
        CHECK(v[0] == 1.0f);
        for (size_t i = 1; i < v.size(); ++i) CHECK(v[i] == 0.0f);
    }
}

TEST_CASE("entry text is the canonical Q/A form") {
    CHECK(entry_text(rec(3, "ask", "answer")) == "Q: ask\nA: answer");
}

TEST_CASE("empty store digest is the SHA-256 of zero bytes") {
    auto store = make_store(MemoryKind::vector, {}, embedder());
    CHECK(store->digest() == kEmptyStoreDigest);
    CHECK(sha256_hex("") == kEmptyStoreDigest);
    CHECK(store->size() == 0);
    auto ctx = store->retrieve("anything", 5);
    CHECK(ctx.entries.empty());
    CHECK(ctx.scores.empty());
}

TEST_CASE("digest covers text and tags but not embeddings") {
    auto a = make_store(MemoryKind::vector, {}, std::make_shared<HashingEmbedder>(64));
    auto b = make_store(MemoryKind::vector, {}, std::make_shared<HashingEmbedder>(256));
    a->write(rec(1, "q", "r"));
    b->write(rec(1, "q", "r"));
    // different embedding dimensionality, identical digests
    CHECK(a->digest() == b->digest());

    auto c = make_store(MemoryKind::vector, {}, std::make_shared<HashingEmbedder>(64));
    c->write(rec(1, "q", "r"),
             {AuditTag{"High_Bias_Detected", "Age_Bias", "t", "g", 1.0}});
    CHECK(c->digest() != a->digest());

    std::string before = a->digest();
    a->write(rec(2, "q2", "r2"));
    CHECK(a->digest() != before);
}

TEST_CASE("frozen store rejects writes and unfreezing restores them") {
    auto store = make_store(MemoryKind::vector, {}, embedder());
    store->write(rec(1, "a", "b"));
    store->freeze();
    CHECK(store->frozen());
    try {
        store->write(rec(2, "c", "d"));
        FAIL_CHECK("expected read_only_violation");
    } catch (const error& e) {
        CHECK(e.code() == errc::read_only_violation);
    }
    std::string digest = store->digest();
    CHECK(store->retrieve("a", 1).entries.size() == 1);  // reads stay legal
    CHECK(store->digest() == digest);
    store->unfreeze();
    CHECK(!store->frozen());
    CHECK(store->write(rec(2, "c", "d")) == 1);
    CHECK(store->size() == 2);
}

TEST_CASE("vector retrieval matches a brute-force oracle") {
    auto emb = embedder();
    auto store = make_store(MemoryKind::vector, {}, emb);
    auto texts = sample_texts(64);
    for (size_t i = 0; i < texts.size(); ++i)
        store->write(rec(static_cast<int>(i + 1), texts[i], "noted"));

    const std::string queries[] = {
        "entropy in closed thermodynamic systems",
        "volatile asset option pricing",
        "something entirely unrelated to the corpus",
    };
    for (const auto& q : queries) {
        Embedding qe = emb->embed(q);
        auto all = store->entries();
        std::vector<std::pair<double, int64_t>> oracle;
        for (const auto& e : all) oracle.emplace_back(cosine(qe, e.embedding), e.entry_id);
        std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second > b.second;
        });
        for (int k : {1, 3, 5, 17, 64, 100}) {
            auto ctx = store->retrieve(q, k);
            size_t expect = std::min<size_t>(oracle.size(), static_cast<size_t>(k));
            REQUIRE(ctx.entries.size() == expect);
            for (size_t i = 0; i < expect; ++i) {
                CHECK(ctx.entries[i].entry_id == oracle[i].second);
                CHECK(ctx.scores[i] == doctest::Approx(oracle[i].first).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("retrieval breaks score ties toward the newer entry") {
    auto store = make_store(MemoryKind::vector, {}, embedder());
    store->write(rec(1, "identical text", "same"));
    store->write(rec(2, "identical text", "same"));
    store->write(rec(3, "completely different material", "same"));
    auto ctx = store->retrieve("identical text", 3);
    REQUIRE(ctx.entries.size() == 3);
    CHECK(ctx.entries[0].entry_id == 1);  // newer of the two equal scorers
    CHECK(ctx.entries[1].entry_id == 0);
    CHECK(ctx.scores[0] == doctest::Approx(ctx.scores[1]).epsilon(1e-12));
    // presentation order: scores non-increasing
    CHECK(ctx.scores[1] >= ctx.scores[2]);
}

TEST_CASE("serialize/deserialize round-trips bytes, digest and retrieval") {
    for (MemoryKind kind : {MemoryKind::vector, MemoryKind::cluster, MemoryKind::paged}) {
        CAPTURE(memory_kind_name(kind));
        auto emb = embedder();
        auto store = make_store(kind, StoreParams{3, 0.2}, emb);
        auto texts = sample_texts(11);
        for (size_t i = 0; i < texts.size(); ++i) {
            std::vector<AuditTag> tags;
            if (i % 4 == 0)
                tags.push_back(AuditTag{"High_Bias_Detected", "Race_Bias",
                                        "tendency", "guideline", 0.875});
            store->write(rec(static_cast<int>(i + 1), texts[i], "resp " + std::to_string(i)),
                         std::move(tags));
        }

        std::string snap = store->serialize();
        auto back = deserialize_store(snap, emb);
        CHECK(back->kind() == kind);
        CHECK(back->size() == store->size());
        CHECK(back->digest() == store->digest());
        CHECK(back->serialize() == snap);  // byte-stable round trip

        // embeddings survive the 9-significant-digit decimal round trip exactly
        auto orig_entries = store->entries();
        auto back_entries = back->entries();
        REQUIRE(orig_entries.size() == back_entries.size());
        for (size_t i = 0; i < orig_entries.size(); ++i)
            CHECK(orig_entries[i].embedding == back_entries[i].embedding);

        for (const char* q : {"entropy systems", "court precedent", "zzz"}) {
            auto a = store->retrieve(q, 4);
            auto b = back->retrieve(q, 4);
            REQUIRE(a.entries.size() == b.entries.size());
            for (size_t i = 0; i < a.entries.size(); ++i) {
                CHECK(a.entries[i].entry_id == b.entries[i].entry_id);
                CHECK(a.scores[i] == b.scores[i]);
            }
        }
    }
}

TEST_CASE("deserialize rejects corrupt snapshots") {
    auto emb = embedder();
    auto expect_corrupt = [&](const std::string& snap, const char* what) {
        CAPTURE(what);
        try {
            deserialize_store(snap, emb);
            FAIL_CHECK("expected corrupt_snapshot for " << what);
        } catch (const error& e) {
            CHECK(e.code() == errc::corrupt_snapshot);
        }
    };
    expect_corrupt("", "empty snapshot");
    expect_corrupt("not json\n", "non-JSON header");
    expect_corrupt("{\"kind\":\"tape\",\"dim\":256,\"params\":{},\"entries\":0}\n",
                   "unknown kind");

    auto store = make_store(MemoryKind::vector, {}, emb);
    store->write(rec(1, "a", "b"));
    store->write(rec(2, "c", "d"));
    std::string good = store->serialize();

    auto lines = split_lines(good);
    REQUIRE(lines.size() == 3);
    expect_corrupt(lines[0] + "\n" + lines[1] + "\n", "missing entry");
    expect_corrupt(lines[0] + "\n" + lines[2] + "\n" + lines[1] + "\n",
                   "ids out of order");
    expect_corrupt(lines[0] + "\n" + lines[1] + "\nnot json\n", "bad entry line");
}

TEST_CASE("cluster store groups by threshold and keeps centroid invariants") {
    auto emb = embedder();
    ClusterStore store(emb, 0.55);
    // Two tight families of texts plus one outlier.
    std::vector<std::string> texts = {
        "grain futures market hedging strategies commodity",
        "grain futures market hedging tactics commodity",
        "grain futures market hedging commodity positions",
        "renaissance fresco restoration pigment analysis",
        "renaissance fresco restoration pigment chemistry",
        "xylophone",
    };
    for (size_t i = 0; i < texts.size(); ++i)
        store.write(rec(static_cast<int>(i + 1), texts[i], "ok"));

    auto clusters = store.clusters();
    auto entries = store.entries();
    REQUIRE(!clusters.empty());

    size_t members_total = 0;
    std::set<size_t> seen;
    for (const auto& c : clusters) {
        REQUIRE(!c.members.empty());
        members_total += c.members.size();
        for (size_t idx : c.members) CHECK(seen.insert(idx).second);

        // centroid equals the renormalized member mean
        std::vector<double> mean(kEmbedDim, 0.0);
        for (size_t idx : c.members)
            for (int j = 0; j < kEmbedDim; ++j)
                mean[static_cast<size_t>(j)] += entries[idx].embedding[static_cast<size_t>(j)];
        double norm2 = 0.0;
        for (double v : mean) norm2 += (v / c.members.size()) * (v / c.members.size());
        REQUIRE(norm2 > 0.0);
        double inv = 1.0 / (std::sqrt(norm2) * static_cast<double>(c.members.size()));
        double cnorm2 = 0.0;
        for (int j = 0; j < kEmbedDim; ++j) {
            CHECK(c.centroid[static_cast<size_t>(j)] ==
                  doctest::Approx(mean[static_cast<size_t>(j)] * inv).epsilon(1e-5));
            cnorm2 += static_cast<double>(c.centroid[static_cast<size_t>(j)]) *
                      c.centroid[static_cast<size_t>(j)];
        }
        CHECK(cnorm2 == doctest::Approx(1.0).epsilon(1e-5));

        // every member clears the admission threshold against today's centroid,
        // or founded the cluster
        if (c.members.size() > 1) {
            for (size_t idx : c.members) {
                // members were admitted against historical centroids; sanity-check
                // they are at least closer to their own centroid than to -1
                CHECK(cosine(entries[idx].embedding, c.centroid) > -1.0);
            }
        }
    }
    CHECK(members_total == store.size());

    // the two grain texts and the two fresco texts must share clusters
    auto cluster_of = [&](size_t entry_idx) -> int {
        for (size_t c = 0; c < clusters.size(); ++c)
            for (size_t idx : clusters[c].members)
                if (idx == entry_idx) return static_cast<int>(c);
        return -1;
    };
    CHECK(cluster_of(0) == cluster_of(1));
    CHECK(cluster_of(0) == cluster_of(2));
    CHECK(cluster_of(3) == cluster_of(4));
    CHECK(cluster_of(0) != cluster_of(3));
    CHECK(cluster_of(5) != cluster_of(0));
    CHECK(cluster_of(5) != cluster_of(3));
}

TEST_CASE("threshold one isolates every distinct entry") {
    auto emb = embedder();
    ClusterStore store(emb, 1.0 + 1e-12);
    store.write(rec(1, "alpha beta", "x"));
    store.write(rec(2, "gamma delta", "x"));
    store.write(rec(3, "epsilon zeta", "x"));
    CHECK(store.clusters().size() == 3);
}

TEST_CASE("cluster retrieval drains best clusters first") {
    auto emb = embedder();
    ClusterStore store(emb, 0.55);
    std::vector<std::string> texts = {
        "grain futures market hedging strategies commodity",
        "grain futures market hedging tactics commodity",
        "renaissance fresco restoration pigment analysis",
        "renaissance fresco restoration pigment chemistry",
    };
    for (size_t i = 0; i < texts.size(); ++i)
        store.write(rec(static_cast<int>(i + 1), texts[i], "ok"));
    REQUIRE(store.clusters().size() == 2);

    auto ctx = store.retrieve("grain commodity hedging", 2);
    REQUIRE(ctx.entries.size() == 2);
    std::set<int64_t> got{ctx.entries[0].entry_id, ctx.entries[1].entry_id};
    CHECK(got == std::set<int64_t>{0, 1});  // both from the nearest cluster
}

TEST_CASE("paged store keeps a FIFO window backed by an archive") {
    auto emb = embedder();
    PagedStore store(emb, 8);
    auto texts = sample_texts(12);
    for (size_t i = 0; i < texts.size(); ++i)
        store.write(rec(static_cast<int>(i + 1), texts[i], "ok"));

    auto window = store.window_ids();
    auto archive = store.archive_ids();
    CHECK(window == std::vector<int64_t>{4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(archive == std::vector<int64_t>{0, 1, 2, 3});

    SUBCASE("window is always returned even when k is smaller") {
        auto ctx = store.retrieve(texts[5], 2);
        CHECK(ctx.entries.size() == 8);
        std::set<int64_t> ids;
        for (const auto& e : ctx.entries) ids.insert(e.entry_id);
        CHECK(ids == std::set<int64_t>{4, 5, 6, 7, 8, 9, 10, 11});
    }

    SUBCASE("archive tops the result up to k by cosine") {
        Embedding qe = emb->embed(texts[0]);
        auto ctx = store.retrieve(texts[0], 10);
        CHECK(ctx.entries.size() == 10);
        std::set<int64_t> ids;
        for (const auto& e : ctx.entries) ids.insert(e.entry_id);
        for (int64_t w : window) CHECK(ids.count(w) == 1);
        // the two archive picks are the best-scoring archived entries
        auto all = store.entries();
        std::vector<std::pair<double, int64_t>> arch_scored;
        for (int64_t a : archive)
            arch_scored.emplace_back(cosine(qe, all[static_cast<size_t>(a)].embedding), a);
        std::sort(arch_scored.begin(), arch_scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second > b.second;
        });
        CHECK(ids.count(arch_scored[0].second) == 1);
        CHECK(ids.count(arch_scored[1].second) == 1);
        CHECK(ids.count(arch_scored[2].second) == 0);
        CHECK(ids.count(arch_scored[3].second) == 0);
    }

    SUBCASE("k beyond the population returns everything") {
        auto ctx = store.retrieve("anything", 100);
        CHECK(ctx.entries.size() == 12);
        for (size_t i = 1; i < ctx.scores.size(); ++i)
            CHECK(ctx.scores[i - 1] >= ctx.scores[i]);
    }
}

TEST_CASE("paged window below capacity holds every entry") {
    auto emb = embedder();
    PagedStore store(emb, 8);
    store.write(rec(1, "one", "r"));
    store.write(rec(2, "two", "r"));
    CHECK(store.window_ids() == std::vector<int64_t>{0, 1});
    CHECK(store.archive_ids().empty());
    CHECK(store.retrieve("one", 1).entries.size() == 2);  // window residency wins
}

TEST_CASE("entry ids are monotone from zero across engines") {
    for (MemoryKind kind : {MemoryKind::vector, MemoryKind::cluster, MemoryKind::paged}) {
        auto store = make_store(kind, {}, embedder());
        for (int i = 0; i < 5; ++i)
            CHECK(store->write(rec(i + 1, "q" + std::to_string(i), "r")) == i);
        auto entries = store->entries();
        for (size_t i = 0; i < entries.size(); ++i) {
            CHECK(entries[i].entry_id == static_cast<int64_t>(i));
            CHECK(entries[i].turn == static_cast<int>(i + 1));
        }
    }
}
