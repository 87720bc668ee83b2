#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wlf/errors.hpp"
#include "wlf/kernels/config.hpp"

namespace wlf::kernels {

using ColourId = std::int32_t;

// Sentinel for summaries not present in a frozen table. It participates
// as a neighbour colour during inference but never enters the table and
// is excluded from refinement outputs.
inline constexpr ColourId kUnseen = -1;

// Canonical hash input: own colour plus a (colour, label) list sorted
// ascending. Labels 1..max_label are graph edge labels; higher values
// are reserved tags that let every algorithm variant share this shape
// (see ColourTable tag accessors).
struct Summary {
    ColourId own = kUnseen;
    std::vector<std::pair<ColourId, int>> pairs;

    bool operator==(const Summary &) const = default;
};

struct SummaryHash {
    std::size_t operator()(const Summary &s) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::uint64_t>(s.own) + 0x100ull);
        for (auto [c, l] : s.pairs) {
            mix(static_cast<std::uint64_t>(c) + 0x100ull);
            mix(static_cast<std::uint64_t>(l));
        }
        return static_cast<std::size_t>(h);
    }
};

// Lazily built injective hash from summaries to dense colour ids.
// Colours [0, alphabet_size) are the initial node features; table
// entries are allocated above them in first-seen order, which makes two
// identical insertion sequences produce identical tables.
class ColourTable {
public:
    ColourTable(KernelConfig config, int alphabet_size, int max_label)
        : config_(config), alphabet_size_(alphabet_size), max_label_(max_label) {}

    const KernelConfig &config() const {return config_;}
    int alphabet_size() const {return alphabet_size_;}
    int max_label() const {return max_label_;}

    // Reserved label tags, outside the genuine label range.
    int tag_ordered_second() const {return max_label_ + 1;}
    int tag_unordered_second() const {return max_label_ + 2;}
    int tag_init_second() const {return max_label_ + 3;}
    int tag_init_edge() const {return max_label_ + 4;}
    int tag_individualised() const {return max_label_ + 5;}
    int tag_pair_ref() const {return max_label_ + 6;}

    bool frozen() const {return frozen_;}
    void freeze() {frozen_ = true;}

    std::size_t entry_count() const {return entries_.size();}
    ColourId colour_count() const {
        return alphabet_size_ + static_cast<ColourId>(entries_.size());
    }

    // Learning mode allocates a fresh colour for an unknown summary;
    // inference maps it (and any summary mentioning kUnseen) to kUnseen.
    ColourId get(const Summary &summary, bool learning) {
        auto it = lookup_.find(summary);
        if (it != lookup_.end())
            return it->second;
        if (!learning || frozen_)
            return kUnseen;
        ColourId id = colour_count();
        lookup_.emplace(summary, id);
        entries_.push_back(summary);
        depths_.push_back(derive_depth(summary));
        return id;
    }

    bool is_feature_colour(ColourId c) const {return c >= 0 && c < alphabet_size_;}

    const Summary &entry(ColourId c) const {
        return entries_.at(static_cast<std::size_t>(c - alphabet_size_));
    }

    // Iteration depth: 0 for features, individualised features and
    // initial pair states; refinements sit one above their own colour.
    int depth(ColourId c) const {
        if (c < alphabet_size_)
            return 0;
        return depths_.at(static_cast<std::size_t>(c - alphabet_size_));
    }

    bool is_refinement(ColourId c) const {
        if (c < alphabet_size_)
            return false;
        return entry_kind(entry(c)) == Kind::refinement;
    }

    enum class Kind { refinement, init_pair, individualised, aux_pair };

    Kind entry_kind(const Summary &s) const {
        for (auto [c, l] : s.pairs) {
            if (l == tag_individualised())
                return Kind::individualised;
            if (l == tag_init_second() || l == tag_init_edge())
                return Kind::init_pair;
            if (l == tag_ordered_second() || l == tag_unordered_second())
                return Kind::aux_pair;
        }
        return Kind::refinement; // genuine labels or tag_pair_ref, or no neighbours
    }

    nlohmann::json to_json() const {
        nlohmann::json entries = nlohmann::json::array();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            nlohmann::json pairs = nlohmann::json::array();
            for (auto [c, l] : entries_[i].pairs)
                pairs.push_back({c, l});
            entries.push_back({entries_[i].own, pairs,
                               alphabet_size_ + static_cast<ColourId>(i)});
        }
        return nlohmann::json{{"version", 1},
                              {"algorithm", to_string(config_.algorithm)},
                              {"iterations", config_.iterations},
                              {"hash", to_string(config_.hash)},
                              {"max_pair_states", config_.max_pair_states},
                              {"alphabet_size", alphabet_size_},
                              {"max_label", max_label_},
                              {"entries", entries}};
    }

    static ColourTable from_json(const nlohmann::json &j) {
        if (!j.contains("version") || j.at("version").get<int>() != 1)
            throw ValidationError("unsupported colour table version");
        KernelConfig config;
        config.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        config.iterations = j.at("iterations").get<int>();
        config.hash = hash_from_string(j.at("hash").get<std::string>());
        config.max_pair_states = j.at("max_pair_states").get<std::uint64_t>();
        ColourTable table(config, j.at("alphabet_size").get<int>(),
                          j.at("max_label").get<int>());
        for (const auto &e : j.at("entries")) {
            Summary s;
            s.own = e.at(0).get<ColourId>();
            for (const auto &p : e.at(1))
                s.pairs.emplace_back(p.at(0).get<ColourId>(), p.at(1).get<int>());
            ColourId expected = e.at(2).get<ColourId>();
            if (table.get(s, true) != expected)
                throw ValidationError("corrupt colour table: ids not contiguous");
        }
        table.freeze();
        return table;
    }

private:
    int derive_depth(const Summary &s) const {
        switch (entry_kind(s)) {
        case Kind::individualised:
        case Kind::init_pair:
            return 0;
        case Kind::aux_pair: {
            int d = depth(s.own);
            for (auto [c, l] : s.pairs)
                if (l == tag_ordered_second() || l == tag_unordered_second())
                    d = std::max(d, depth(c));
            return d;
        }
        case Kind::refinement:
            return depth(s.own) + 1;
        }
        return 0;
    }

    KernelConfig config_;
    int alphabet_size_;
    int max_label_;
    bool frozen_ = false;
    std::vector<Summary> entries_;
    std::vector<int> depths_;
    std::unordered_map<Summary, ColourId, SummaryHash> lookup_;
};

// Ordered training vocabulary: every colour seen in any training
// output, in ascending colour id order.
struct FeatureIndex {
    std::vector<ColourId> colours;
    std::unordered_map<ColourId, int> position;

    static FeatureIndex of(std::vector<ColourId> ids) {
        FeatureIndex index;
        index.colours = std::move(ids);
        for (std::size_t i = 0; i < index.colours.size(); ++i)
            index.position.emplace(index.colours[i], static_cast<int>(i));
        return index;
    }

    int find(ColourId c) const {
        auto it = position.find(c);
        return it == position.end() ? -1 : it->second;
    }

    std::size_t size() const {return colours.size();}

    nlohmann::json to_json() const {return nlohmann::json(colours);}

    static FeatureIndex from_json(const nlohmann::json &j) {
        return of(j.get<std::vector<ColourId>>());
    }
};

} // namespace wlf::kernels
