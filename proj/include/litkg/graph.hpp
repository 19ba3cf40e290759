#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "litkg/errors.hpp"
#include "litkg/schema.hpp"

namespace litkg {

using EntityId = std::int32_t;

struct Entity {
    EntityId id = 0;
    std::string key;
    EntityAttrs attrs;

    EntityKind kind() const { return static_cast<EntityKind>(attrs.index()); }
};

struct Triplet {
    EntityId head = 0;
    Relation relation = Relation::authored_by;
    EntityId tail = 0;
    std::optional<double> weight;
};

/// Immutable directed property graph. Entity ids are dense [0, |V|),
/// assigned in sorted (kind, key) order; per-relation forward and reverse
/// adjacency are CSR indexes. Read access is safe to share across threads.
class PropertyGraph {
public:
    static PropertyGraph build(const CuratedGraphInput& curated) {
        PropertyGraph g;
        g.entities_.reserve(curated.entities.size());
        for (const auto& e : curated.entities) {
            Entity ent;
            ent.id = static_cast<EntityId>(g.entities_.size());
            ent.key = e.key;
            ent.attrs = e.attrs;
            g.entities_.push_back(std::move(ent));
        }
        // curated input is sorted (kind, key); record the kind ranges
        g.kind_begin_.fill(0);
        for (size_t i = 0; i < g.entities_.size(); ++i) {
            if (i > 0 && g.entities_[i].kind() < g.entities_[i - 1].kind())
                throw InputError("build_graph: entities not sorted by kind");
            if (i > 0 && g.entities_[i].kind() == g.entities_[i - 1].kind() &&
                g.entities_[i].key <= g.entities_[i - 1].key)
                throw InputError("build_graph: duplicate or unsorted entity key '" +
                                 g.entities_[i].key + "'");
        }
        for (int k = 0; k <= 5; ++k) {
            size_t pos = 0;
            while (pos < g.entities_.size() && static_cast<int>(g.entities_[pos].kind()) < k)
                ++pos;
            g.kind_begin_[k] = static_cast<EntityId>(pos);
        }

        g.triplets_.reserve(curated.triplets.size());
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(curated.triplets.size() * 2);
        for (const auto& t : curated.triplets) {
            auto head = g.find(head_kind(t.relation), t.head_key);
            auto tail = g.find(tail_kind(t.relation), t.tail_key);
            if (!head || !tail) {
                // distinguish a signature violation from a dangling key
                const std::string& missing_key = !head ? t.head_key : t.tail_key;
                for (EntityKind k : kAllEntityKinds)
                    if (g.find(k, missing_key))
                        throw InputError(std::string("build_graph: ") +
                                         relation_name(t.relation) + " expects " +
                                         kind_name(!head ? head_kind(t.relation)
                                                         : tail_kind(t.relation)) +
                                         " endpoint, but '" + missing_key + "' is a " +
                                         kind_name(k));
                throw InputError(std::string("build_graph: ") + relation_name(t.relation) +
                                 " references unknown entity '" + missing_key + "'");
            }
            std::uint64_t packed = (static_cast<std::uint64_t>(*head) << 35) |
                                   (static_cast<std::uint64_t>(t.relation) << 32) |
                                   static_cast<std::uint64_t>(*tail);
            if (!seen.insert(packed).second)
                throw InputError(std::string("build_graph: duplicate triplet (") + t.head_key +
                                 ", " + relation_name(t.relation) + ", " + t.tail_key + ")");
            g.triplets_.push_back({*head, t.relation, *tail, t.weight});
        }
        g.build_adjacency();
        return g;
    }

    size_t entity_count() const { return entities_.size(); }
    size_t triplet_count() const { return triplets_.size(); }
    const Entity& entity(EntityId id) const { return entities_[static_cast<size_t>(id)]; }
    const std::vector<Entity>& entities() const { return entities_; }
    const std::vector<Triplet>& triplets() const { return triplets_; }

    std::optional<EntityId> find(EntityKind kind, const std::string& key) const {
        EntityId lo = kind_begin_[static_cast<size_t>(kind)];
        EntityId hi = kind_begin_[static_cast<size_t>(kind) + 1];
        auto begin = entities_.begin() + lo;
        auto end = entities_.begin() + hi;
        auto it = std::lower_bound(begin, end, key, [](const Entity& e, const std::string& k) {
            return e.key < k;
        });
        if (it != end && it->key == key) return it->id;
        return std::nullopt;
    }

    std::span<const Entity> entities_of(EntityKind kind) const {
        EntityId lo = kind_begin_[static_cast<size_t>(kind)];
        EntityId hi = kind_begin_[static_cast<size_t>(kind) + 1];
        return {entities_.data() + lo, static_cast<size_t>(hi - lo)};
    }

    size_t count_of(EntityKind kind) const { return entities_of(kind).size(); }

    size_t relation_count(Relation r) const {
        return fwd_[static_cast<size_t>(r)].neighbors.size();
    }

    std::span<const EntityId> out_neighbors(Relation r, EntityId id) const {
        return adjacency_span(fwd_[static_cast<size_t>(r)], id);
    }
    std::span<const EntityId> in_neighbors(Relation r, EntityId id) const {
        return adjacency_span(rev_[static_cast<size_t>(r)], id);
    }
    std::span<const double> out_weights(Relation r, EntityId id) const {
        const Adjacency& adj = fwd_[static_cast<size_t>(r)];
        auto i = static_cast<size_t>(id);
        return {adj.weights.data() + adj.offsets[i],
                static_cast<size_t>(adj.offsets[i + 1] - adj.offsets[i])};
    }

private:
    struct Adjacency {
        std::vector<std::int64_t> offsets; // |V| + 1
        std::vector<EntityId> neighbors;
        std::vector<double> weights; // NaN where the triplet has no weight
    };

    std::span<const EntityId> adjacency_span(const Adjacency& adj, EntityId id) const {
        auto i = static_cast<size_t>(id);
        return {adj.neighbors.data() + adj.offsets[i],
                static_cast<size_t>(adj.offsets[i + 1] - adj.offsets[i])};
    }

    void build_adjacency() {
        const size_t n = entities_.size();
        for (size_t r = 0; r < kRelationCount; ++r) {
            fwd_[r].offsets.assign(n + 1, 0);
            rev_[r].offsets.assign(n + 1, 0);
        }
        for (const auto& t : triplets_) {
            ++fwd_[static_cast<size_t>(t.relation)].offsets[static_cast<size_t>(t.head) + 1];
            ++rev_[static_cast<size_t>(t.relation)].offsets[static_cast<size_t>(t.tail) + 1];
        }
        for (size_t r = 0; r < kRelationCount; ++r) {
            for (size_t i = 0; i < n; ++i) {
                fwd_[r].offsets[i + 1] += fwd_[r].offsets[i];
                rev_[r].offsets[i + 1] += rev_[r].offsets[i];
            }
            fwd_[r].neighbors.resize(static_cast<size_t>(fwd_[r].offsets[n]));
            fwd_[r].weights.resize(static_cast<size_t>(fwd_[r].offsets[n]));
            rev_[r].neighbors.resize(static_cast<size_t>(rev_[r].offsets[n]));
        }
        std::array<std::vector<std::int64_t>, kRelationCount> fcur, rcur;
        for (size_t r = 0; r < kRelationCount; ++r) {
            fcur[r] = fwd_[r].offsets;
            rcur[r] = rev_[r].offsets;
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (const auto& t : triplets_) {
            size_t r = static_cast<size_t>(t.relation);
            auto fpos = static_cast<size_t>(fcur[r][static_cast<size_t>(t.head)]++);
            fwd_[r].neighbors[fpos] = t.tail;
            fwd_[r].weights[fpos] = t.weight.value_or(nan);
            rev_[r].neighbors[static_cast<size_t>(rcur[r][static_cast<size_t>(t.tail)]++)] =
                t.head;
        }
    }

    std::vector<Entity> entities_;
    std::vector<Triplet> triplets_;
    std::array<EntityId, 6> kind_begin_{};
    std::array<Adjacency, kRelationCount> fwd_;
    std::array<Adjacency, kRelationCount> rev_;
};

inline PropertyGraph build_graph(const CuratedGraphInput& curated) {
    return PropertyGraph::build(curated);
}

} // namespace litkg
