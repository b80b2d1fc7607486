#include "mimic/servo_layout.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mimic/errors.hpp"
#include "mimic/text_io.hpp"

namespace mimic {

std::string region_name(Region r) {
    switch (r) {
        case Region::Eye: return "eye";
        case Region::Eyelid: return "eyelid";
        case Region::Brow: return "brow";
        case Region::Head: return "head";
        case Region::Mouth: return "mouth";
    }
    return "eye";
}

Region region_from_name(const std::string& s) {
    if (s == "eye") return Region::Eye;
    if (s == "eyelid") return Region::Eyelid;
    if (s == "brow") return Region::Brow;
    if (s == "head") return Region::Head;
    if (s == "mouth") return Region::Mouth;
    throw FormatError("unknown region tag: '" + s + "'");
}

int ServoLayout::count_region(Region r) const {
    int n = 0;
    for (const auto& c : channels)
        if (c.region == r) ++n;
    return n;
}

void ServoLayout::validate() const {
    if (static_cast<int>(channels.size()) != kNumServos)
        throw ArgumentError("layout must have exactly 25 channels, got " +
                            std::to_string(channels.size()));
    for (int i = 0; i < kNumServos; ++i) {
        const auto& c = channels[i];
        if (!(c.lo >= 0.0 && c.hi <= 1.0 && c.lo < c.hi))
            throw ArgumentError("channel " + std::to_string(i) +
                                " limits must be a non-empty sub-interval of [0,1]");
        if (c.name.empty())
            throw ArgumentError("channel " + std::to_string(i) + " has no name");
    }
    auto check_index = [](int idx, const std::string& what) {
        if (idx < 0 || idx >= kNumServos)
            throw ArgumentError(what + " references channel " + std::to_string(idx));
    };
    for (const auto& [l, r] : sym_pairs) {
        check_index(l, "sym_pair");
        check_index(r, "sym_pair");
        if (l == r) throw ArgumentError("sym_pair with identical indices");
    }
    for (const auto& g : couplings) {
        std::set<int> seen;
        for (int idx : g) {
            check_index(idx, "coupling");
            if (!seen.insert(idx).second)
                throw ArgumentError("coupling group with duplicate index");
        }
        if (g.size() < 2) throw ArgumentError("coupling group needs >= 2 channels");
    }
    for (const auto& rule : rules) {
        std::set<int> seen;  // pairs/groups must be disjoint within a rule
        auto use_index = [&](int idx) {
            check_index(idx, "rule " + std::to_string(rule.id));
            if (!seen.insert(idx).second)
                throw ArgumentError("rule " + std::to_string(rule.id) +
                                    " references channel " + std::to_string(idx) + " twice");
        };
        for (const auto& [l, r] : rule.pairs) {
            use_index(l);
            use_index(r);
        }
        for (const auto& g : rule.groups)
            for (int idx : g) use_index(idx);
        for (const auto& [l, r] : rule.sync_within) {
            check_index(l, "rule sync_within");
            check_index(r, "rule sync_within");
            if (!seen.count(l) || !seen.count(r))
                throw ArgumentError("rule sync_within pair outside its exclusion groups");
        }
        for (int idx : rule.channels) use_index(idx);
    }
}

ServoLayout make_default_layout() {
    using namespace servo;
    ServoLayout lay;
    lay.channels.resize(kNumServos);
    auto set = [&](int i, const char* name, Region r, double lo, double hi) {
        lay.channels[i] = ServoChannel{name, r, lo, hi};
    };
    set(kEyeHorizL, "eye_horizontal_left", Region::Eye, 0.0, 1.0);
    set(kEyeHorizR, "eye_horizontal_right", Region::Eye, 0.0, 1.0);
    set(kEyeVertL, "eye_vertical_left", Region::Eye, 0.0, 1.0);
    set(kEyeVertR, "eye_vertical_right", Region::Eye, 0.0, 1.0);
    set(kBlinkL, "blink_left", Region::Eyelid, 0.0, 1.0);
    set(kBlinkR, "blink_right", Region::Eyelid, 0.0, 1.0);
    set(kEyeOpenL, "eye_opening_left", Region::Eyelid, 0.0, 0.95);
    set(kEyeOpenR, "eye_opening_right", Region::Eyelid, 0.0, 0.95);
    set(kBrowRaiseL, "brow_raise_left", Region::Brow, 0.0, 0.9);
    set(kBrowRaiseR, "brow_raise_right", Region::Brow, 0.0, 0.9);
    set(kBrowFrownL, "brow_frown_left", Region::Brow, 0.0, 0.9);
    set(kBrowFrownR, "brow_frown_right", Region::Brow, 0.0, 0.9);
    set(kHeadYaw, "head_yaw", Region::Head, 0.0, 1.0);
    set(kUpperLipL, "upper_lip_left", Region::Mouth, 0.0, 0.8);
    set(kUpperLipR, "upper_lip_right", Region::Mouth, 0.0, 0.8);
    set(kLowerLipL, "lower_lip_left", Region::Mouth, 0.0, 0.8);
    set(kLowerLipR, "lower_lip_right", Region::Mouth, 0.0, 0.8);
    set(kSmileL, "smile_corner_left", Region::Mouth, 0.0, 1.0);
    set(kSmileR, "smile_corner_right", Region::Mouth, 0.0, 1.0);
    set(kSadL, "sad_corner_left", Region::Mouth, 0.0, 0.9);
    set(kSadR, "sad_corner_right", Region::Mouth, 0.0, 0.9);
    set(kCornerUpL, "corner_up_left", Region::Mouth, 0.0, 0.9);
    set(kCornerUpR, "corner_up_right", Region::Mouth, 0.0, 0.9);
    set(kJawL, "jaw_left", Region::Mouth, 0.0, 0.85);
    set(kJawR, "jaw_right", Region::Mouth, 0.0, 0.85);

    lay.sym_pairs = {{kEyeHorizL, kEyeHorizR}, {kEyeVertL, kEyeVertR},
                     {kBlinkL, kBlinkR},       {kEyeOpenL, kEyeOpenR},
                     {kBrowRaiseL, kBrowRaiseR}, {kBrowFrownL, kBrowFrownR},
                     {kSmileL, kSmileR},       {kSadL, kSadR},
                     {kJawL, kJawR}};
    lay.couplings = {{kJawL, kJawR}};

    ConstraintRule r1{1, RuleKind::Sync, {{kEyeHorizL, kEyeHorizR}}, {}, {}, {}};
    ConstraintRule r2{2, RuleKind::Sync, {{kEyeVertL, kEyeVertR}}, {}, {}, {}};
    ConstraintRule r3{3, RuleKind::Sync, {{kBlinkL, kBlinkR}}, {}, {}, {}};
    ConstraintRule r4{4, RuleKind::Sync, {{kEyeOpenL, kEyeOpenR}}, {}, {}, {}};
    ConstraintRule r5{5, RuleKind::Exclusion, {},
                      {{kBrowRaiseL, kBrowRaiseR}, {kBrowFrownL, kBrowFrownR}},
                      {{kBrowRaiseL, kBrowRaiseR}, {kBrowFrownL, kBrowFrownR}}, {}};
    ConstraintRule r6{6, RuleKind::Free, {}, {}, {}, {kHeadYaw}};
    // Rule 7: one mouth action at a time; smile and sadness pairs stay
    // synchronized; corner-up channels are independent.
    ConstraintRule r7{7, RuleKind::Exclusion, {},
                      {{kSmileL, kSmileR}, {kSadL, kSadR}, {kCornerUpL, kCornerUpR}},
                      {{kSmileL, kSmileR}, {kSadL, kSadR}}, {}};
    lay.rules = {r1, r2, r3, r4, r5, r6, r7};

    lay.validate();
    return lay;
}

ServoFrame clamp_frame(const ServoFrame& frame, const ServoLayout& layout) {
    if (frame.size() != static_cast<std::size_t>(kNumServos))
        throw DimensionError("servo frame must have 25 values, got " +
                             std::to_string(frame.size()));
    ServoFrame out(frame);
    for (int i = 0; i < kNumServos; ++i)
        out[i] = std::clamp(out[i], layout.channels[i].lo, layout.channels[i].hi);
    return out;
}

std::vector<int> check_constraints(const ServoFrame& frame, const ServoLayout& layout,
                                   double tol) {
    if (frame.size() != static_cast<std::size_t>(kNumServos))
        throw DimensionError("servo frame must have 25 values, got " +
                             std::to_string(frame.size()));
    std::vector<int> violated;
    const double act = layout.activation_threshold;
    for (const auto& rule : layout.rules) {
        bool bad = false;
        switch (rule.kind) {
            case RuleKind::Sync:
                for (const auto& [l, r] : rule.pairs)
                    if (std::abs(frame[l] - frame[r]) > tol) bad = true;
                break;
            case RuleKind::Exclusion: {
                int active_groups = 0;
                for (const auto& g : rule.groups) {
                    bool any = false;
                    for (int idx : g)
                        if (frame[idx] > act) any = true;
                    if (any) ++active_groups;
                }
                if (active_groups > 1) bad = true;
                for (const auto& [l, r] : rule.sync_within)
                    if (std::abs(frame[l] - frame[r]) > tol) bad = true;
                break;
            }
            case RuleKind::Free:
                break;
        }
        if (bad) violated.push_back(rule.id);
    }
    return violated;
}

namespace {

void write_pair_list(std::ostringstream& out, const char* key,
                     const std::vector<std::pair<int, int>>& pairs) {
    for (const auto& [l, r] : pairs) out << key << " " << l << " " << r << "\n";
}

}  // namespace

std::string layout_to_text(const ServoLayout& layout) {
    std::ostringstream out;
    out << "servo-layout 1\n";
    out << "channels " << layout.channels.size() << "\n\n";
    for (std::size_t i = 0; i < layout.channels.size(); ++i) {
        const auto& c = layout.channels[i];
        out << "channel " << i << "\n";
        out << "name " << c.name << "\n";
        out << "region " << region_name(c.region) << "\n";
        out << "lo " << format_double(c.lo) << "\n";
        out << "hi " << format_double(c.hi) << "\n\n";
    }
    write_pair_list(out, "sym_pair", layout.sym_pairs);
    for (const auto& g : layout.couplings) {
        out << "coupling";
        for (int idx : g) out << " " << idx;
        out << "\n";
    }
    for (const auto& rule : layout.rules) {
        out << "rule " << rule.id << " ";
        switch (rule.kind) {
            case RuleKind::Sync:
                out << "sync";
                for (const auto& [l, r] : rule.pairs) out << " " << l << " " << r;
                break;
            case RuleKind::Exclusion: {
                out << "excl";
                bool first = true;
                for (const auto& g : rule.groups) {
                    if (!first) out << " /";
                    first = false;
                    for (int idx : g) out << " " << idx;
                }
                for (const auto& [l, r] : rule.sync_within)
                    out << " sync " << l << " " << r;
                break;
            }
            case RuleKind::Free:
                out << "free";
                for (int idx : rule.channels) out << " " << idx;
                break;
        }
        out << "\n";
    }
    out << "activation_threshold " << format_double(layout.activation_threshold) << "\n";
    return out.str();
}

ServoLayout layout_from_text(const std::string& text) {
    ServoLayout lay;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int current = -1;
    int declared = -1;
    auto fail = [&](const std::string& msg) {
        throw FormatError("layout line " + std::to_string(lineno) + ": " + msg);
    };
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size()) fail("bad integer '" + s + "'");
            return v;
        } catch (const FormatError&) {
            throw;
        } catch (...) {
            fail("bad integer '" + s + "'");
        }
        return 0;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = split_ws(line);
        if (tok.empty() || tok[0][0] == '#') continue;
        const std::string& key = tok[0];
        if (key == "servo-layout") {
            if (tok.size() != 2 || tok[1] != "1") fail("unsupported layout version");
        } else if (key == "channels") {
            if (tok.size() != 2) fail("channels needs a count");
            declared = to_int(tok[1]);
            lay.channels.resize(declared);
        } else if (key == "channel") {
            if (tok.size() != 2) fail("channel needs an index");
            current = to_int(tok[1]);
            if (current < 0 || current >= static_cast<int>(lay.channels.size()))
                fail("channel index out of range");
        } else if (key == "name" || key == "region" || key == "lo" || key == "hi") {
            if (current < 0) fail("'" + key + "' outside a channel block");
            if (tok.size() < 2) fail("'" + key + "' needs a value");
            auto& c = lay.channels[current];
            if (key == "name") c.name = tok[1];
            else if (key == "region") c.region = region_from_name(tok[1]);
            else if (key == "lo") c.lo = parse_double(tok[1]);
            else c.hi = parse_double(tok[1]);
        } else if (key == "sym_pair") {
            if (tok.size() != 3) fail("sym_pair needs two indices");
            lay.sym_pairs.emplace_back(to_int(tok[1]), to_int(tok[2]));
        } else if (key == "coupling") {
            std::vector<int> g;
            for (std::size_t i = 1; i < tok.size(); ++i) g.push_back(to_int(tok[i]));
            lay.couplings.push_back(std::move(g));
        } else if (key == "rule") {
            if (tok.size() < 3) fail("rule needs an id and a kind");
            ConstraintRule rule;
            rule.id = to_int(tok[1]);
            const std::string& kind = tok[2];
            std::size_t i = 3;
            if (kind == "sync") {
                rule.kind = RuleKind::Sync;
                if ((tok.size() - i) % 2 != 0) fail("sync rule needs index pairs");
                while (i + 1 < tok.size()) {
                    rule.pairs.emplace_back(to_int(tok[i]), to_int(tok[i + 1]));
                    i += 2;
                }
            } else if (kind == "excl") {
                rule.kind = RuleKind::Exclusion;
                std::vector<int> group;
                while (i < tok.size()) {
                    if (tok[i] == "/") {
                        if (!group.empty()) rule.groups.push_back(group);
                        group.clear();
                    } else if (tok[i] == "sync") {
                        if (i + 2 >= tok.size()) fail("rule sync needs two indices");
                        rule.sync_within.emplace_back(to_int(tok[i + 1]), to_int(tok[i + 2]));
                        i += 2;
                    } else {
                        group.push_back(to_int(tok[i]));
                    }
                    ++i;
                }
                if (!group.empty()) rule.groups.push_back(group);
            } else if (kind == "free") {
                rule.kind = RuleKind::Free;
                while (i < tok.size()) rule.channels.push_back(to_int(tok[i++]));
            } else {
                fail("unknown rule kind '" + kind + "'");
            }
            lay.rules.push_back(std::move(rule));
        } else if (key == "activation_threshold") {
            if (tok.size() != 2) fail("activation_threshold needs a value");
            lay.activation_threshold = parse_double(tok[1]);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (declared != static_cast<int>(lay.channels.size()))
        throw FormatError("layout: declared channel count does not match");
    try {
        lay.validate();
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("layout: ") + e.what());
    }
    return lay;
}

void save_layout(const ServoLayout& layout, const std::string& path) {
    write_file_atomic(path, layout_to_text(layout));
}

ServoLayout load_layout(const std::string& path) {
    return layout_from_text(read_file(path));
}

}  // namespace mimic
