#include "novfp/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "novfp/error.hpp"
#include "novfp/parallel.hpp"

namespace novfp {

std::string to_string(FingerprintMethod m) {
    return m == FingerprintMethod::split_half ? "split_half" : "loo";
}

FingerprintMethod parse_fingerprint_method(std::string_view name) {
    if (name == "loo") return FingerprintMethod::leave_one_out;
    if (name == "split_half") return FingerprintMethod::split_half;
    throw ConfigError("unknown fingerprint method: " + std::string(name));
}

namespace {

struct SumEntry {
    std::uint64_t index;
    double sum;
    std::size_t contributors;
};

// Centroid of members with one member removed, built from running sums so
// each held-out book costs one pass over the merged support.
class LeaveOneOut {
public:
    LeaveOneOut(const FeatureSet& fs, std::span<const std::size_t> members) : fs_(fs), members_(members) {
        if (members.size() < 2) throw InputError("leave-one-out needs at least two books");
        if (fs.has_dense()) {
            sum_.assign(fs.dense_dim, 0.0);
            for (std::size_t m : members) {
                auto r = fs.row(m);
                for (std::size_t d = 0; d < fs.dense_dim; ++d) sum_[d] += r[d];
            }
        }
        if (fs.has_dists()) {
            std::vector<std::pair<std::uint64_t, double>> all;
            for (std::size_t m : members) {
                const auto& p = fs.dists[m];
                for (std::size_t i = 0; i < p.size(); ++i) all.emplace_back(p.index[i], p.prob[i]);
            }
            std::sort(all.begin(), all.end());
            for (const auto& [idx, p] : all) {
                if (!merged_.empty() && merged_.back().index == idx) {
                    merged_.back().sum += p;
                    ++merged_.back().contributors;
                } else {
                    merged_.push_back({idx, p, 1});
                }
            }
        }
    }

    Centroid without(std::size_t book) const {
        Centroid c;
        const double rest = static_cast<double>(members_.size() - 1);
        if (fs_.has_dense()) {
            auto r = fs_.row(book);
            c.dense.resize(fs_.dense_dim);
            for (std::size_t d = 0; d < fs_.dense_dim; ++d) c.dense[d] = (sum_[d] - r[d]) / rest;
        }
        if (fs_.has_dists()) {
            const auto& p = fs_.dists[book];
            std::size_t j = 0;
            double total = 0.0;
            for (const auto& e : merged_) {
                double v = e.sum;
                std::size_t n = e.contributors;
                while (j < p.size() && p.index[j] < e.index) ++j;
                if (j < p.size() && p.index[j] == e.index) {
                    v -= p.prob[j];
                    --n;
                }
                if (n == 0) continue;
                v = std::max(v, 0.0);
                c.dist.index.push_back(e.index);
                c.dist.prob.push_back(v);
                total += v;
            }
            for (double& v : c.dist.prob) v /= total;
        }
        return c;
    }

private:
    const FeatureSet& fs_;
    std::span<const std::size_t> members_;
    std::vector<double> sum_;
    std::vector<SumEntry> merged_;
};

std::vector<double> loo_distances(const FeatureSet& fs, std::span<const std::size_t> members) {
    LeaveOneOut loo(fs, members);
    std::vector<double> out;
    out.reserve(members.size());
    for (std::size_t b : members) out.push_back(distance(fs, b, loo.without(b)));
    return out;
}

double mean_of(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(std::span<const double> v, double mean) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
}

double split_half_statistic(const FeatureSet& fs, std::span<const std::size_t> members, Rng& rng,
                            std::size_t repeats) {
    if (members.size() < 2) throw InputError("split-half needs at least two books");
    if (repeats == 0) throw ConfigError("n_repeats must be positive");
    std::vector<std::size_t> perm(members.begin(), members.end());
    const std::size_t first = (perm.size() + 1) / 2;
    double acc = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
        rng.shuffle(std::span<std::size_t>(perm));
        std::vector<std::size_t> a(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(first));
        std::vector<std::size_t> b(perm.begin() + static_cast<std::ptrdiff_t>(first), perm.end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        acc += distance(fs, centroid(fs, a), centroid(fs, b));
    }
    return acc / static_cast<double>(repeats);
}

std::size_t require_author(const AuthorIndex& index, std::string_view author, std::size_t min_books) {
    const std::size_t a = index.find(author);
    if (a == index.authors.size()) throw InputError("unknown author: " + std::string(author));
    if (index.books[a].size() < min_books)
        throw InputError("author " + std::string(author) + " has fewer than " + std::to_string(min_books) + " books");
    return a;
}

void finish(AuthorFingerprint& f, std::span<const double> null_values, std::size_t at_or_below,
            const FingerprintOptions& opts) {
    f.null_mean = mean_of(null_values);
    f.null_std = std_of(null_values, f.null_mean);
    if (f.null_std < 1e-12) {
        f.null_degenerate = true;
        f.effect = 0.0;
    } else {
        f.effect = (f.null_mean - f.intra_mean) / f.null_std;
    }
    f.p_value = static_cast<double>(1 + at_or_below) / static_cast<double>(1 + opts.n_null);
    f.significant = f.p_value < opts.alpha;
}

}  // namespace

std::vector<std::size_t> draw_pseudo_author(Rng& rng, const AuthorIndex& index, std::size_t exclude, std::size_t m) {
    const std::size_t n_authors = index.authors.size();
    const std::size_t others = exclude < n_authors ? n_authors - 1 : n_authors;
    std::vector<std::size_t> picked;
    picked.reserve(m);
    if (others >= m) {
        for (std::size_t k : rng.sample(others, m)) {
            const std::size_t a = (exclude < n_authors && k >= exclude) ? k + 1 : k;
            const auto& books = index.books[a];
            picked.push_back(books[rng.below(books.size())]);
        }
    } else {
        std::vector<std::size_t> pool;
        for (std::size_t a = 0; a < n_authors; ++a)
            if (a != exclude) pool.insert(pool.end(), index.books[a].begin(), index.books[a].end());
        if (pool.size() < m) throw InputError("too few books by other authors to build a null");
        for (std::size_t k : rng.sample(pool.size(), m)) picked.push_back(pool[k]);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

AuthorFingerprint loo_fingerprint(const FeatureSet& fs, const AuthorIndex& index, std::string_view author,
                                  const FingerprintOptions& opts) {
    const std::size_t a = require_author(index, author, 2);
    const auto& own = index.books[a];
    AuthorFingerprint f;
    f.author_id = std::string(author);
    f.n_books = own.size();
    f.intra_mean = mean_of(loo_distances(fs, own));

    Rng rng(derive_seed(opts.seed, {opts.stream, "loo", author}));
    std::vector<double> null_values;
    null_values.reserve(opts.n_null * own.size());
    std::size_t below = 0;
    for (std::size_t r = 0; r < opts.n_null; ++r) {
        auto pseudo = draw_pseudo_author(rng, index, a, own.size());
        auto d = loo_distances(fs, pseudo);
        if (mean_of(d) <= f.intra_mean) ++below;
        null_values.insert(null_values.end(), d.begin(), d.end());
    }
    finish(f, null_values, below, opts);
    return f;
}

AuthorFingerprint split_half_fingerprint(const FeatureSet& fs, const AuthorIndex& index, std::string_view author,
                                         const FingerprintOptions& opts) {
    const std::size_t a = require_author(index, author, 4);
    const auto& own = index.books[a];
    AuthorFingerprint f;
    f.author_id = std::string(author);
    f.n_books = own.size();

    Rng rng(derive_seed(opts.seed, {opts.stream, "split_half", author}));
    f.intra_mean = split_half_statistic(fs, own, rng, opts.n_repeats);
    std::vector<double> null_values;
    null_values.reserve(opts.n_null);
    std::size_t below = 0;
    for (std::size_t r = 0; r < opts.n_null; ++r) {
        auto pseudo = draw_pseudo_author(rng, index, a, own.size());
        const double t = split_half_statistic(fs, pseudo, rng, opts.n_repeats);
        if (t <= f.intra_mean) ++below;
        null_values.push_back(t);
    }
    finish(f, null_values, below, opts);
    return f;
}

AuthorFingerprint fingerprint(const FeatureSet& fs, const AuthorIndex& index, std::string_view author,
                              FingerprintMethod method, const FingerprintOptions& opts) {
    return method == FingerprintMethod::split_half ? split_half_fingerprint(fs, index, author, opts)
                                                   : loo_fingerprint(fs, index, author, opts);
}

std::vector<AuthorFingerprint> fingerprint_all(const FeatureSet& fs, FingerprintMethod method,
                                               const FingerprintOptions& opts, std::size_t min_books,
                                               unsigned threads) {
    if (opts.n_null == 0) throw ConfigError("n_null must be positive");
    const AuthorIndex index(fs);
    const std::size_t floor = method == FingerprintMethod::split_half ? 4 : 2;
    std::vector<std::size_t> eligible;
    for (std::size_t a = 0; a < index.authors.size(); ++a)
        if (index.books[a].size() >= std::max(floor, min_books)) eligible.push_back(a);
    std::vector<AuthorFingerprint> out(eligible.size());
    parallel_for(eligible.size(), threads, [&](std::size_t i) {
        out[i] = fingerprint(fs, index, index.authors[eligible[i]], method, opts);
    });
    return out;
}

double Attribution::top_k(std::size_t k) const {
    if (ranks.empty()) return 0.0;
    const auto hits = std::count_if(ranks.begin(), ranks.end(), [k](std::size_t r) { return r <= k; });
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double Attribution::chance(std::size_t k) const {
    if (n_candidates == 0) return 0.0;
    return static_cast<double>(std::min(k, n_candidates)) / static_cast<double>(n_candidates);
}

Attribution attribute_all(const FeatureSet& fs, unsigned threads) {
    const AuthorIndex index(fs);
    std::vector<std::size_t> candidates;
    Attribution out;
    for (std::size_t a = 0; a < index.authors.size(); ++a) {
        if (index.books[a].size() >= 2)
            candidates.push_back(a);
        else
            out.excluded_authors.push_back(index.authors[a]);
    }
    if (candidates.size() < 2) throw InputError("attribution needs at least two authors with two or more books");
    out.n_candidates = candidates.size();

    std::vector<Centroid> full(candidates.size());
    parallel_for(candidates.size(), threads,
                 [&](std::size_t c) { full[c] = centroid(fs, index.books[candidates[c]]); });

    std::vector<std::pair<std::size_t, std::size_t>> books;  // (candidate slot, row)
    for (std::size_t c = 0; c < candidates.size(); ++c)
        for (std::size_t row : index.books[candidates[c]]) books.emplace_back(c, row);

    out.ranks.assign(books.size(), 0);
    parallel_for(books.size(), threads, [&](std::size_t i) {
        const auto [own, row] = books[i];
        std::vector<std::size_t> rest;
        for (std::size_t r : index.books[candidates[own]])
            if (r != row) rest.push_back(r);
        const double d_own = distance(fs, row, centroid(fs, rest));
        std::size_t rank = 1;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (c == own) continue;
            const double d = distance(fs, row, full[c]);
            // Candidates are in author order, so a tie beats the true author
            // exactly when the rival's id sorts first.
            if (d < d_own || (d == d_own && c < own)) ++rank;
        }
        out.ranks[i] = rank;
    });
    for (const auto& [c, row] : books) {
        out.book_ids.push_back(fs.book_ids[row]);
        out.author_ids.push_back(fs.author_ids[row]);
    }
    return out;
}

namespace {

std::string motif_label(std::uint64_t index, int alphabet, std::size_t k) {
    if (alphabet < 2 || k == 0) return "m" + std::to_string(index);
    std::string s(k, 'a');
    for (std::size_t i = k; i-- > 0;) {
        s[i] = static_cast<char>('a' + index % static_cast<std::uint64_t>(alphabet));
        index /= static_cast<std::uint64_t>(alphabet);
    }
    return s;
}

}  // namespace

FisherRatios fisher_ratios(const FeatureSet& fs) {
    const AuthorIndex index(fs);
    std::vector<std::size_t> eligible;
    for (std::size_t a = 0; a < index.authors.size(); ++a)
        if (index.books[a].size() >= 2) eligible.push_back(a);
    if (eligible.size() < 2) throw InputError("fisher ratios need at least two authors with two or more books");

    FisherRatios out;
    std::vector<std::vector<double>> columns;  // [dim][row]
    if (fs.has_dense()) {
        for (std::size_t d = 0; d < fs.dense_dim; ++d) {
            out.labels.push_back(fs.dense_labels.size() == fs.dense_dim ? fs.dense_labels[d]
                                                                        : "dim" + std::to_string(d));
            std::vector<double> col(fs.size());
            for (std::size_t i = 0; i < fs.size(); ++i) col[i] = fs.row(i)[d];
            columns.push_back(std::move(col));
        }
    }
    if (fs.has_dists()) {
        std::map<std::uint64_t, std::size_t> dims;
        for (std::size_t a : eligible)
            for (std::size_t row : index.books[a])
                for (auto idx : fs.dists[row].index) dims.emplace(idx, 0);
        for (auto& [idx, pos] : dims) {
            pos = columns.size();
            out.labels.push_back(motif_label(idx, fs.alphabet, fs.motif_length));
            columns.emplace_back(fs.size(), 0.0);
        }
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const auto& p = fs.dists[i];
            for (std::size_t j = 0; j < p.size(); ++j) {
                auto it = dims.find(p.index[j]);
                if (it != dims.end()) columns[it->second][i] = p.prob[j];
            }
        }
    }

    for (const auto& col : columns) {
        std::vector<double> means;
        double within = 0.0;
        for (std::size_t a : eligible) {
            const auto& rows = index.books[a];
            double m = 0.0;
            for (std::size_t r : rows) m += col[r];
            m /= static_cast<double>(rows.size());
            double v = 0.0;
            for (std::size_t r : rows) v += (col[r] - m) * (col[r] - m);
            within += v / static_cast<double>(rows.size());
            means.push_back(m);
        }
        within /= static_cast<double>(eligible.size());
        const double grand = mean_of(means);
        double between = 0.0;
        for (double m : means) between += (m - grand) * (m - grand);
        between /= static_cast<double>(means.size());
        if (within < 1e-12) {
            out.infinite.push_back(true);
            out.ratio.push_back(between > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0);
        } else {
            out.infinite.push_back(false);
            out.ratio.push_back(between / within);
        }
    }
    return out;
}

FingerprintSummary summarize(const std::vector<AuthorFingerprint>& results) {
    FingerprintSummary s;
    s.n_authors = results.size();
    if (results.empty()) return s;
    std::size_t sig = 0;
    double eff = 0.0;
    for (const auto& r : results) {
        sig += r.significant ? 1 : 0;
        eff += r.effect;
    }
    s.pct_significant = 100.0 * static_cast<double>(sig) / static_cast<double>(results.size());
    s.mean_effect = eff / static_cast<double>(results.size());
    return s;
}

nlohmann::json to_json(const AuthorFingerprint& f) {
    return {{"author_id", f.author_id},   {"n_books", f.n_books},         {"intra_mean", f.intra_mean},
            {"null_mean", f.null_mean},   {"null_std", f.null_std},       {"effect", f.effect},
            {"p_value", f.p_value},       {"significant", f.significant}, {"null_degenerate", f.null_degenerate}};
}

std::string fingerprints_csv(const std::vector<AuthorFingerprint>& rows) {
    std::ostringstream os;
    os << "author_id,n_books,intra_mean,null_mean,null_std,effect,p_value,significant,null_degenerate\n";
    char buf[256];
    for (const auto& f : rows) {
        std::snprintf(buf, sizeof buf, ",%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", f.n_books, f.intra_mean,
                      f.null_mean, f.null_std, f.effect, f.p_value, f.significant ? 1 : 0,
                      f.null_degenerate ? 1 : 0);
        os << f.author_id << buf;
    }
    return os.str();
}

}  // namespace novfp
