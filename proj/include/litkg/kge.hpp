#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "litkg/csv.hpp"
#include "litkg/errors.hpp"
#include "litkg/graph.hpp"
#include "litkg/rng.hpp"
#include "litkg/vec.hpp"

namespace litkg {

struct KgeConfig {
    int dim = 400;
    double gamma = 12.0;
    int negatives_per_positive = 16;
    int batch_size = 1024;
    double learning_rate = 0.01;
    int epochs = 100;
    std::uint64_t seed = 0;
    std::set<Relation> include_relations = {kAllRelations.begin(), kAllRelations.end()};
    bool unit_norm_projection = false;
    int workers = 1; // >1 parallelizes gradient computation within batches

    void check() const {
        if (dim < 1) throw InputError("kge: dim must be >= 1");
        if (gamma <= 0.0) throw InputError("kge: gamma must be > 0");
        if (negatives_per_positive < 1) throw InputError("kge: negatives must be >= 1");
        if (batch_size < 1) throw InputError("kge: batch_size must be >= 1");
        if (epochs < 0) throw InputError("kge: epochs must be >= 0");
        if (workers < 1) throw InputError("kge: workers must be >= 1");
    }
};

/// Entity and relation embedding tables plus the per-epoch loss trace.
class KgeModel {
public:
    KgeModel() = default;
    KgeModel(size_t entity_count, int dim, double gamma)
        : dim_(dim),
          gamma_(gamma),
          entity_count_(entity_count),
          entity_table_(entity_count * static_cast<size_t>(dim), 0.0),
          relation_table_(kRelationCount * static_cast<size_t>(dim), 0.0) {}

    int dim() const { return dim_; }
    double gamma() const { return gamma_; }
    size_t entity_count() const { return entity_count_; }

    std::span<double> entity_vec(EntityId id) {
        return {entity_table_.data() + static_cast<size_t>(id) * static_cast<size_t>(dim_),
                static_cast<size_t>(dim_)};
    }
    std::span<const double> entity_vec(EntityId id) const {
        return {entity_table_.data() + static_cast<size_t>(id) * static_cast<size_t>(dim_),
                static_cast<size_t>(dim_)};
    }
    std::span<double> relation_vec(Relation r) {
        return {relation_table_.data() + static_cast<size_t>(r) * static_cast<size_t>(dim_),
                static_cast<size_t>(dim_)};
    }
    std::span<const double> relation_vec(Relation r) const {
        return {relation_table_.data() + static_cast<size_t>(r) * static_cast<size_t>(dim_),
                static_cast<size_t>(dim_)};
    }

    std::vector<double>& entity_table() { return entity_table_; }
    const std::vector<double>& entity_table() const { return entity_table_; }
    std::vector<double>& relation_table() { return relation_table_; }
    const std::vector<double>& relation_table() const { return relation_table_; }

    std::vector<double> loss_trace;

private:
    int dim_ = 0;
    double gamma_ = 12.0;
    size_t entity_count_ = 0;
    std::vector<double> entity_table_;
    std::vector<double> relation_table_;
};

/// score = gamma - ||h + r - t||_2; never exceeds gamma, equality iff
/// h + r = t exactly.
inline double score_triplet(const KgeModel& model, EntityId head, Relation relation,
                            EntityId tail) {
    if (head < 0 || tail < 0 || static_cast<size_t>(head) >= model.entity_count() ||
        static_cast<size_t>(tail) >= model.entity_count())
        throw InputError("score_triplet: entity id out of bounds");
    auto h = model.entity_vec(head);
    auto r = model.relation_vec(relation);
    auto t = model.entity_vec(tail);
    double sq = 0.0;
    for (int i = 0; i < model.dim(); ++i) {
        double d = h[i] + r[i] - t[i];
        sq += d * d;
    }
    return model.gamma() - std::sqrt(sq);
}

inline double score_triplet(const KgeModel& model, const Triplet& t) {
    return score_triplet(model, t.head, t.relation, t.tail);
}

/// Numerically stable softplus(-y * score) = log(1 + exp(-y * score)).
inline double loss_term(double score, int y) {
    double x = -static_cast<double>(y) * score;
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Loss and analytic gradients of one logistic term w.r.t. the three
/// embedding arguments. grad_t = -grad_h; the subgradient at the
/// non-differentiable point h + r = t is taken as zero.
inline double loss_and_gradients(std::span<const double> h, std::span<const double> r,
                                 std::span<const double> t, int y, double gamma,
                                 std::span<double> grad_h, std::span<double> grad_r,
                                 std::span<double> grad_t) {
    const size_t d = h.size();
    double sq = 0.0;
    for (size_t i = 0; i < d; ++i) {
        double delta = h[i] + r[i] - t[i];
        grad_h[i] = delta; // stash delta, rescaled below
        sq += delta * delta;
    }
    double norm = std::sqrt(sq);
    double score = gamma - norm;
    double x = -static_cast<double>(y) * score;
    double sigmoid = 1.0 / (1.0 + std::exp(-x)); // d loss / d x
    // d loss / d h_i = y * sigmoid * delta_i / norm
    double scale = norm > 1e-12 ? static_cast<double>(y) * sigmoid / norm : 0.0;
    for (size_t i = 0; i < d; ++i) {
        double g = scale * grad_h[i];
        grad_h[i] = g;
        grad_r[i] = g;
        grad_t[i] = -g;
    }
    return loss_term(score, y);
}

/// Exact membership filter over the positive triplet set.
class PositiveSet {
public:
    explicit PositiveSet(size_t expected = 0) { set_.reserve(expected * 2); }

    void insert(EntityId h, Relation r, EntityId t) { set_.insert(pack(h, r, t)); }
    bool contains(EntityId h, Relation r, EntityId t) const {
        return set_.count(pack(h, r, t)) != 0;
    }

private:
    // 29 bits head | 3 bits relation | 32 bits tail; plenty at corpus scale
    static std::uint64_t pack(EntityId h, Relation r, EntityId t) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(h)) << 35) |
               (static_cast<std::uint64_t>(r) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(t));
    }
    std::unordered_set<std::uint64_t> set_;
};

/// Filtered uniform corruption: a fair coin picks head or tail, the chosen
/// endpoint is replaced by a uniform entity id, and corruptions that
/// reproduce a known positive are resampled.
inline std::vector<Triplet> sample_negatives(const Triplet& triplet, int n, Rng& rng,
                                             const PositiveSet& positives,
                                             size_t entity_count) {
    if (n < 1) throw InputError("sample_negatives: n must be >= 1");
    if (entity_count < 2) throw InputError("sample_negatives: need at least 2 entities");
    std::vector<Triplet> out;
    out.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        Triplet neg = triplet;
        for (int attempt = 0;; ++attempt) {
            bool corrupt_head = rng.coin();
            EntityId replacement = static_cast<EntityId>(rng.uniform_index(entity_count));
            neg = triplet;
            if (corrupt_head) neg.head = replacement;
            else neg.tail = replacement;
            if (!positives.contains(neg.head, neg.relation, neg.tail)) break;
            if (attempt > 1000)
                throw ComputeError("sample_negatives: could not find a negative (graph too "
                                   "dense for uniform corruption)");
        }
        neg.weight.reset();
        out.push_back(neg);
    }
    return out;
}

namespace kge_detail {

using GradMap = std::map<EntityId, std::vector<double>>;

inline void add_grad(GradMap& grads, EntityId id, std::span<const double> g) {
    auto [it, inserted] = grads.try_emplace(id, g.size(), 0.0);
    auto& acc = it->second;
    for (size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
}

struct BatchTerm {
    Triplet triplet;
    int y = 1;
};

struct WorkerResult {
    GradMap entity_grads;
    std::array<std::vector<double>, kRelationCount> relation_grads;
    double loss_sum = 0.0;
};

inline WorkerResult accumulate_terms(const KgeModel& model,
                                     std::span<const BatchTerm> terms) {
    WorkerResult out;
    const int d = model.dim();
    std::vector<double> gh(d), gr(d), gt(d);
    for (const auto& term : terms) {
        out.loss_sum += loss_and_gradients(
            model.entity_vec(term.triplet.head), model.relation_vec(term.triplet.relation),
            model.entity_vec(term.triplet.tail), term.y, model.gamma(), gh, gr, gt);
        add_grad(out.entity_grads, term.triplet.head, gh);
        add_grad(out.entity_grads, term.triplet.tail, gt);
        auto& rg = out.relation_grads[static_cast<size_t>(term.triplet.relation)];
        if (rg.empty()) rg.assign(static_cast<size_t>(d), 0.0);
        for (int i = 0; i < d; ++i) rg[static_cast<size_t>(i)] += gr[static_cast<size_t>(i)];
    }
    return out;
}

} // namespace kge_detail

struct TrainOptions {
    KgeConfig config;
    std::uint64_t seed = 0; // effective seed (already derived by the caller)
};

/// Minibatch SGD on the logistic TransE objective over an explicit
/// positive-triplet list. Deterministic for a fixed seed and worker count;
/// single-worker mode is the reference path.
inline KgeModel train_kge_on(const std::vector<Triplet>& positives, size_t entity_count,
                             const KgeConfig& config) {
    config.check();
    if (positives.empty()) throw InputError("train_kge: no triplets to train on");

    KgeModel model(entity_count, config.dim, config.gamma);
    Rng rng(config.seed);
    const double bound = 6.0 / std::sqrt(static_cast<double>(config.dim));
    for (double& x : model.entity_table()) x = rng.uniform(-bound, bound);
    for (double& x : model.relation_table()) x = rng.uniform(-bound, bound);

    PositiveSet positive_set(positives.size());
    for (const auto& t : positives) positive_set.insert(t.head, t.relation, t.tail);

    std::vector<std::uint32_t> order(positives.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;

    const int d = config.dim;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.unit_norm_projection) {
            for (size_t e = 0; e < entity_count; ++e) {
                auto v = model.entity_vec(static_cast<EntityId>(e));
                double n = vec::norm(v);
                if (n > 0.0)
                    for (double& x : v) x /= n;
            }
        }
        rng.shuffle(order);
        double epoch_loss = 0.0;
        long epoch_terms = 0;
        for (size_t begin = 0; begin < order.size(); begin += config.batch_size) {
            size_t end = std::min(order.size(), begin + config.batch_size);

            std::vector<kge_detail::BatchTerm> terms;
            terms.reserve((end - begin) * (1 + config.negatives_per_positive));
            for (size_t i = begin; i < end; ++i) {
                const Triplet& pos = positives[order[i]];
                terms.push_back({pos, +1});
                for (auto& neg : sample_negatives(pos, config.negatives_per_positive, rng,
                                                  positive_set, entity_count))
                    terms.push_back({neg, -1});
            }

            std::vector<kge_detail::WorkerResult> results;
            if (config.workers == 1) {
                results.push_back(kge_detail::accumulate_terms(model, terms));
            } else {
                size_t w = std::min<size_t>(static_cast<size_t>(config.workers), terms.size());
                results.resize(w);
                std::vector<std::thread> pool;
                size_t chunk = (terms.size() + w - 1) / w;
                for (size_t j = 0; j < w; ++j) {
                    size_t lo = j * chunk;
                    size_t hi = std::min(terms.size(), lo + chunk);
                    pool.emplace_back([&, j, lo, hi] {
                        results[j] = kge_detail::accumulate_terms(
                            model, std::span<const kge_detail::BatchTerm>(terms.data() + lo,
                                                                          hi - lo));
                    });
                }
                for (auto& th : pool) th.join();
            }

            const double step =
                config.learning_rate / static_cast<double>(terms.size()); // mean loss
            for (const auto& res : results) { // fixed merge order keeps this deterministic
                epoch_loss += res.loss_sum;
                for (const auto& [id, grad] : res.entity_grads) {
                    auto v = model.entity_vec(id);
                    for (int i = 0; i < d; ++i)
                        v[static_cast<size_t>(i)] -= step * grad[static_cast<size_t>(i)];
                }
                for (size_t r = 0; r < kRelationCount; ++r) {
                    if (res.relation_grads[r].empty()) continue;
                    auto v = model.relation_vec(static_cast<Relation>(r));
                    for (int i = 0; i < d; ++i)
                        v[static_cast<size_t>(i)] -=
                            step * res.relation_grads[r][static_cast<size_t>(i)];
                }
            }
            epoch_terms += static_cast<long>(terms.size());
        }
        double mean_loss = epoch_terms > 0 ? epoch_loss / static_cast<double>(epoch_terms) : 0.0;
        if (!std::isfinite(mean_loss))
            throw ComputeError("train_kge: non-finite loss at epoch " + std::to_string(epoch) +
                               "; lower the learning rate");
        model.loss_trace.push_back(mean_loss);
    }
    return model;
}

inline std::vector<Triplet> included_triplets(const PropertyGraph& graph,
                                              const std::set<Relation>& include) {
    std::vector<Triplet> out;
    for (const auto& t : graph.triplets())
        if (include.count(t.relation)) out.push_back(t);
    return out;
}

inline KgeModel train_kge(const PropertyGraph& graph, const KgeConfig& config) {
    return train_kge_on(included_triplets(graph, config.include_relations),
                        graph.entity_count(), config);
}

struct ScoredTriplet {
    Triplet triplet;
    int fold = 0;
    double score = 0.0;
};

struct RelationScoreSummary {
    long count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<std::pair<double, long>> histogram; // (bin lower edge, count)
};

struct KfoldResult {
    std::vector<ScoredTriplet> scores; // every triplet scored exactly once
    std::map<std::string, RelationScoreSummary> by_relation;
    // uniformly corrupted versions of the held-out triplets, scored with
    // the same fold models; the baseline the positives should beat
    std::map<std::string, RelationScoreSummary> corrupted_by_relation;
    std::vector<std::string> warnings;
};

namespace kge_detail {

inline RelationScoreSummary summarize(std::vector<double>& xs, int bins) {
    RelationScoreSummary s;
    s.count = static_cast<long>(xs.size());
    if (xs.empty()) return s;
    std::sort(xs.begin(), xs.end());
    s.min = xs.front();
    s.max = xs.back();
    s.mean = vec::mean(xs);
    double var = 0.0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(xs.size()));
    double width = (s.max - s.min) / static_cast<double>(bins);
    if (width <= 0.0) width = 1.0;
    s.histogram.assign(static_cast<size_t>(bins), {0.0, 0});
    for (int b = 0; b < bins; ++b)
        s.histogram[static_cast<size_t>(b)].first = s.min + width * b;
    for (double x : xs) {
        int b = std::min(bins - 1, static_cast<int>((x - s.min) / width));
        ++s.histogram[static_cast<size_t>(b)].second;
    }
    return s;
}

} // namespace kge_detail

/// Splits the positives into `folds` seeded random sets; for each fold
/// trains on the rest and scores the left-out triplets (plus uniformly
/// corrupted copies as a baseline). The test sets form an exact partition
/// of the triplet set.
inline KfoldResult kfold_validate_on(const std::vector<Triplet>& positives,
                                     size_t entity_count, const KgeConfig& config,
                                     int folds = 10) {
    if (folds < 2) throw InputError("kfold_validate: folds must be >= 2");
    if (positives.empty()) throw InputError("kfold_validate: no triplets");

    std::vector<std::uint32_t> order(positives.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(config.seed, "kfold"));
    rng.shuffle(order);

    PositiveSet positive_set(positives.size());
    for (const auto& t : positives) positive_set.insert(t.head, t.relation, t.tail);

    KfoldResult result;
    std::map<std::string, std::vector<double>> scores_by_relation;
    std::map<std::string, std::vector<double>> corrupted_by_relation;
    const size_t n = positives.size();
    for (int fold = 0; fold < folds; ++fold) {
        size_t lo = n * static_cast<size_t>(fold) / static_cast<size_t>(folds);
        size_t hi = n * (static_cast<size_t>(fold) + 1) / static_cast<size_t>(folds);

        std::vector<Triplet> train;
        train.reserve(n - (hi - lo));
        for (size_t i = 0; i < n; ++i)
            if (i < lo || i >= hi) train.push_back(positives[order[i]]);

        std::set<Relation> train_relations;
        for (const auto& t : train) train_relations.insert(t.relation);
        std::set<Relation> wanted;
        for (const auto& t : positives) wanted.insert(t.relation);
        for (Relation r : wanted)
            if (!train_relations.count(r))
                result.warnings.push_back("fold " + std::to_string(fold) +
                                          ": no training triplets for relation " +
                                          relation_name(r));

        KgeConfig fold_config = config;
        fold_config.seed = derive_seed(config.seed, "fold", static_cast<std::uint64_t>(fold));
        KgeModel model = train_kge_on(train, entity_count, fold_config);

        Rng corrupt_rng(derive_seed(config.seed, "kfold-corrupt", static_cast<std::uint64_t>(fold)));
        for (size_t i = lo; i < hi; ++i) {
            const Triplet& t = positives[order[i]];
            double score = score_triplet(model, t);
            result.scores.push_back({t, fold, score});
            scores_by_relation[relation_name(t.relation)].push_back(score);
            for (const auto& neg :
                 sample_negatives(t, 1, corrupt_rng, positive_set, entity_count))
                corrupted_by_relation[relation_name(t.relation)].push_back(
                    score_triplet(model, neg));
        }
    }
    std::sort(result.scores.begin(), result.scores.end(),
              [](const ScoredTriplet& a, const ScoredTriplet& b) {
                  auto ka = std::tie(a.fold, a.triplet.relation, a.triplet.head, a.triplet.tail);
                  auto kb = std::tie(b.fold, b.triplet.relation, b.triplet.head, b.triplet.tail);
                  return ka < kb;
              });
    for (auto& [name, xs] : scores_by_relation)
        result.by_relation[name] = kge_detail::summarize(xs, 20);
    for (auto& [name, xs] : corrupted_by_relation)
        result.corrupted_by_relation[name] = kge_detail::summarize(xs, 20);
    return result;
}

inline KfoldResult kfold_validate(const PropertyGraph& graph, const KgeConfig& config,
                                  int folds = 10) {
    return kfold_validate_on(included_triplets(graph, config.include_relations),
                             graph.entity_count(), config, folds);
}

struct LinkPredictionMetrics {
    double mrr = 0.0;
    double hits_at_1 = 0.0;
    double hits_at_10 = 0.0;
    long queries = 0;
};

/// Filtered ranking over all entities: for each test triplet both the head
/// and the tail are ranked against every candidate replacement, skipping
/// candidates that form a different known positive.
inline LinkPredictionMetrics evaluate_link_prediction(const KgeModel& model,
                                                      const std::vector<Triplet>& test,
                                                      const PositiveSet& known_positives) {
    LinkPredictionMetrics m;
    std::vector<double> rr;
    const auto n = static_cast<EntityId>(model.entity_count());
    for (const auto& t : test) {
        for (int side = 0; side < 2; ++side) {
            double true_score = score_triplet(model, t);
            long rank = 1;
            for (EntityId c = 0; c < n; ++c) {
                Triplet cand = t;
                if (side == 0) cand.tail = c;
                else cand.head = c;
                if ((side == 0 && c == t.tail) || (side == 1 && c == t.head)) continue;
                if (known_positives.contains(cand.head, cand.relation, cand.tail)) continue;
                if (score_triplet(model, cand) > true_score) ++rank;
            }
            rr.push_back(1.0 / static_cast<double>(rank));
            if (rank == 1) m.hits_at_1 += 1.0;
            if (rank <= 10) m.hits_at_10 += 1.0;
            ++m.queries;
        }
    }
    if (m.queries > 0) {
        m.mrr = vec::mean(rr);
        m.hits_at_1 /= static_cast<double>(m.queries);
        m.hits_at_10 /= static_cast<double>(m.queries);
    }
    return m;
}

/// Model persistence: header.json + entity_embeddings.csv (entity_id,
/// v0..v{d-1}) + relation_embeddings.csv + loss_trace.csv.
inline void save_kge_model(const KgeModel& model, const KgeConfig& config,
                           const std::filesystem::path& dir,
                           const std::string& header_comment = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "header.json", std::ios::binary);
        nlohmann::ordered_json j;
        j["dim"] = model.dim();
        j["gamma"] = model.gamma();
        j["entity_count"] = model.entity_count();
        j["relation_count"] = kRelationCount;
        j["seed"] = config.seed;
        j["epochs"] = config.epochs;
        j["learning_rate"] = config.learning_rate;
        j["negatives_per_positive"] = config.negatives_per_positive;
        j["batch_size"] = config.batch_size;
        std::vector<std::string> rels;
        for (Relation r : config.include_relations) rels.push_back(relation_name(r));
        j["include_relations"] = rels;
        j["final_mean_loss"] =
            model.loss_trace.empty() ? nullptr : nlohmann::ordered_json(model.loss_trace.back());
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "entity_embeddings.csv", std::ios::binary);
        if (!header_comment.empty()) out << header_comment;
        std::vector<std::string> header = {"entity_id"};
        for (int i = 0; i < model.dim(); ++i) header.push_back("v" + std::to_string(i));
        csv::write_row(out, header);
        for (size_t e = 0; e < model.entity_count(); ++e) {
            std::vector<std::string> row = {csv::format_int(static_cast<long long>(e))};
            for (double x : model.entity_vec(static_cast<EntityId>(e)))
                row.push_back(csv::format_double(x));
            csv::write_row(out, row);
        }
    }
    {
        std::ofstream out(dir / "relation_embeddings.csv", std::ios::binary);
        if (!header_comment.empty()) out << header_comment;
        std::vector<std::string> header = {"relation"};
        for (int i = 0; i < model.dim(); ++i) header.push_back("v" + std::to_string(i));
        csv::write_row(out, header);
        for (Relation r : kAllRelations) {
            std::vector<std::string> row = {relation_name(r)};
            for (double x : model.relation_vec(r)) row.push_back(csv::format_double(x));
            csv::write_row(out, row);
        }
    }
    {
        std::ofstream out(dir / "loss_trace.csv", std::ios::binary);
        if (!header_comment.empty()) out << header_comment;
        csv::write_row(out, {"epoch", "mean_loss"});
        for (size_t i = 0; i < model.loss_trace.size(); ++i)
            csv::write_row(out, {csv::format_int(static_cast<long long>(i)),
                                 csv::format_double(model.loss_trace[i])});
    }
}

inline KgeModel load_kge_model(const std::filesystem::path& dir) {
    std::ifstream header_in(dir / "header.json", std::ios::binary);
    if (!header_in) throw InputError("cannot open " + (dir / "header.json").string());
    nlohmann::json header = nlohmann::json::parse(header_in);
    const int dim = header.at("dim").get<int>();
    const double gamma = header.at("gamma").get<double>();
    const size_t entity_count = header.at("entity_count").get<size_t>();
    KgeModel model(entity_count, dim, gamma);

    std::vector<std::string> cols = {"entity_id"};
    for (int i = 0; i < dim; ++i) cols.push_back("v" + std::to_string(i));
    auto rows = csv::read_file((dir / "entity_embeddings.csv").string(), cols);
    if (rows.size() != entity_count)
        throw InputError("entity_embeddings.csv: expected " + std::to_string(entity_count) +
                         " rows, got " + std::to_string(rows.size()));
    for (const auto& row : rows) {
        auto id = csv::parse_int(row.fields[0]);
        if (!id || *id < 0 || static_cast<size_t>(*id) >= entity_count)
            throw InputError("entity_embeddings.csv: bad entity_id '" + row.fields[0] + "'");
        auto v = model.entity_vec(static_cast<EntityId>(*id));
        for (int i = 0; i < dim; ++i) {
            auto x = csv::parse_double(row.fields[static_cast<size_t>(i) + 1]);
            if (!x) throw InputError("entity_embeddings.csv: bad value");
            v[static_cast<size_t>(i)] = *x;
        }
    }

    cols[0] = "relation";
    auto rel_rows = csv::read_file((dir / "relation_embeddings.csv").string(), cols);
    for (const auto& row : rel_rows) {
        auto r = parse_relation(row.fields[0]);
        if (!r) throw InputError("relation_embeddings.csv: unknown relation " + row.fields[0]);
        auto v = model.relation_vec(*r);
        for (int i = 0; i < dim; ++i) {
            auto x = csv::parse_double(row.fields[static_cast<size_t>(i) + 1]);
            if (!x) throw InputError("relation_embeddings.csv: bad value");
            v[static_cast<size_t>(i)] = *x;
        }
    }
    return model;
}

} // namespace litkg
