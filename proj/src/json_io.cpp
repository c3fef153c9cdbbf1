#include "treetop/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "treetop/errors.hpp"

namespace treetop {

namespace {

/// Runs a reader, turning library-independent parse failures into SchemaError.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    } catch (const std::out_of_range& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    }
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::string codomain_name(Codomain c) {
    switch (c) {
        case Codomain::Q: return "Q";
        case Codomain::R: return "R";
        case Codomain::RlexR: return "RlexR";
    }
    return "Q";
}

Codomain codomain_from(const std::string& s) {
    if (s == "Q") return Codomain::Q;
    if (s == "R") return Codomain::R;
    if (s == "RlexR") return Codomain::RlexR;
    throw SchemaError("unknown codomain \"" + s + "\"");
}

Json cert_to_json(const TopologyCert& c) {
    if (std::holds_alternative<Closed>(c)) return {{"kind", "closed"}};
    if (const auto* r = std::get_if<RelOpenIn>(&c)) return {{"kind", "rel-open-in"}, {"parent", r->parent}};
    if (const auto* r = std::get_if<ClosedIn>(&c)) return {{"kind", "closed-in"}, {"parent", r->parent}};
    return {{"kind", "none"}};
}

TopologyCert cert_from_json(const Json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "closed") return Closed{};
    if (kind == "rel-open-in") return RelOpenIn{field(j, "parent").get<NodeId>()};
    if (kind == "closed-in") return ClosedIn{field(j, "parent").get<NodeId>()};
    if (kind == "none") return NoCert{};
    throw SchemaError("unknown certificate kind \"" + kind + "\"");
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string caption(const Payload& p) {
    if (const auto* w = std::get_if<WOSet>(&p)) return w->to_string();
    if (const auto* pp = std::get_if<PairPayload>(&p)) return "(" + std::to_string(pp->base) + "," + pp->s + ")";
    if (const auto* s = std::get_if<IntSeq>(&p)) {
        std::string out = "<";
        for (std::size_t i = 0; i < s->seq.size(); ++i) out += (i ? "," : "") + std::to_string(s->seq[i]);
        return out + ">";
    }
    return std::get<Abstract>(p).name;
}

}  // namespace

Json to_json(const Rational& q) { return q.to_string(); }

Rational rational_from_json(const Json& j) {
    return guarded("rational", [&] { return Rational::parse(j.get<std::string>()); });
}

Json to_json(const ExtRational& q) { return q.is_pos_inf() ? std::string("+inf") : q.to_string(); }

ExtRational ext_rational_from_json(const Json& j) {
    return guarded("extended rational", [&] { return ExtRational::parse(j.get<std::string>()); });
}

Json to_json(const Interval& iv) {
    return {{"lo", to_json(iv.lo)}, {"hi", to_json(iv.hi)}, {"lo_closed", iv.lo_closed}, {"hi_closed", iv.hi_closed}};
}

Interval interval_from_json(const Json& j) {
    return guarded("interval", [&] {
        return Interval{ext_rational_from_json(field(j, "lo")), ext_rational_from_json(field(j, "hi")),
                        field(j, "lo_closed").get<bool>(), field(j, "hi_closed").get<bool>()};
    });
}

Json to_json(const WOSet& w) {
    Json blocks = Json::array();
    for (const auto& b : w.blocks()) {
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            Json elems = Json::array();
            for (const auto& e : f->elems) elems.push_back(to_json(e));
            blocks.push_back({{"fin", elems}});
        } else {
            const auto& o = std::get<OmegaBlock>(b);
            blocks.push_back({{"omega", {{"start", to_json(o.start)}, {"limit", to_json(o.limit)}}}});
        }
    }
    return {{"blocks", blocks}};
}

WOSet woset_from_json(const Json& j) {
    return guarded("woset", [&] {
        std::vector<Block> blocks;
        for (const auto& b : field(j, "blocks")) {
            if (b.contains("fin")) {
                FinBlock f;
                for (const auto& e : b.at("fin")) f.elems.push_back(rational_from_json(e));
                blocks.emplace_back(std::move(f));
            } else {
                const Json& o = field(b, "omega");
                blocks.emplace_back(OmegaBlock{rational_from_json(field(o, "start")), rational_from_json(field(o, "limit"))});
            }
        }
        return WOSet(std::move(blocks));
    });
}

Json to_json(const Payload& p) {
    if (const auto* w = std::get_if<WOSet>(&p)) return {{"woset", to_json(*w)}};
    if (const auto* pp = std::get_if<PairPayload>(&p))
        return {{"pair", {{"base", pp->base}, {"s", pp->s}, {"rank", pp->rank}}}};
    if (const auto* s = std::get_if<IntSeq>(&p)) return {{"intseq", s->seq}};
    return {{"abstract", std::get<Abstract>(p).name}};
}

Payload payload_from_json(const Json& j) {
    return guarded("payload", [&]() -> Payload {
        if (j.contains("woset")) return woset_from_json(j.at("woset"));
        if (j.contains("pair")) {
            const Json& p = j.at("pair");
            return PairPayload{field(p, "base").get<NodeId>(), field(p, "s").get<std::string>(), field(p, "rank").get<int>()};
        }
        if (j.contains("intseq")) return IntSeq{j.at("intseq").get<std::vector<std::uint64_t>>()};
        if (j.contains("abstract")) return Abstract{j.at("abstract").get<std::string>()};
        throw SchemaError("unknown payload kind");
    });
}

Json to_json(const LabelValue& v) {
    if (const auto* q = std::get_if<Rational>(&v)) return to_json(*q);
    if (const auto* e = std::get_if<Enclosure>(&v)) return {{"lo", to_json(e->lo)}, {"hi", to_json(e->hi)}};
    const auto& p = std::get<LexPair>(v);
    return {{"first", to_json(p.first)}, {"second", to_json(p.second)}};
}

LabelValue label_value_from_json(const Json& j) {
    return guarded("label value", [&]() -> LabelValue {
        if (j.is_string()) return rational_from_json(j);
        if (j.contains("first")) return LexPair{rational_from_json(j.at("first")), rational_from_json(field(j, "second"))};
        return Enclosure{rational_from_json(field(j, "lo")), rational_from_json(field(j, "hi"))};
    });
}

Json to_json(const OrderLabel& f) {
    Json values = Json::array();
    for (const auto& v : f.values) values.push_back(v ? to_json(*v) : Json(nullptr));
    Json infs = Json::array();
    for (const auto& [key, q] : f.family_inf) infs.push_back({{"node", key.first}, {"family", key.second}, {"inf", to_json(q)}});
    return {{"codomain", codomain_name(f.codomain)}, {"values", values}, {"family_inf", infs}};
}

OrderLabel label_from_json(const Json& j) {
    return guarded("label", [&] {
        OrderLabel f;
        if (j.contains("codomain")) f.codomain = codomain_from(j.at("codomain").get<std::string>());
        const Json& values = field(j, "values");
        if (!values.is_array()) throw SchemaError("label values must be an array");
        for (std::size_t i = 0; i < values.size(); ++i)
            if (!values[i].is_null()) f.set(static_cast<NodeId>(i), label_value_from_json(values[i]));
        if (j.contains("family_inf"))
            for (const auto& e : j.at("family_inf"))
                f.family_inf[{field(e, "node").get<NodeId>(), field(e, "family").get<std::size_t>()}] =
                    rational_from_json(field(e, "inf"));
        return f;
    });
}

Json to_json(const Tree& t) {
    Json nodes = Json::array();
    for (NodeId n = 0; n < t.size(); ++n) {
        const Node& node = t.node(n);
        nodes.push_back({{"id", n},
                         {"parent", node.parent ? Json(*node.parent) : Json(nullptr)},
                         {"payload", to_json(node.payload)},
                         {"frontier", node.frontier},
                         {"limit", node.limit}});
    }
    Json families = Json::object();
    for (const auto& [n, fams] : t.families()) {
        Json list = Json::array();
        for (const auto& f : fams)
            list.push_back({{"interval", to_json(f.interval)},
                            {"rule", f.rule},
                            {"value", {{"alpha", to_json(f.value.alpha)}, {"beta", to_json(f.value.beta)}}}});
        families[std::to_string(n)] = list;
    }
    Json labels = Json::object();
    for (const auto& [name, f] : t.labels()) labels[name] = to_json(f);
    return {{"nodes", nodes}, {"families", families}, {"labels", labels}};
}

Tree tree_from_json(const Json& j) {
    return guarded("tree", [&] {
        const Json& nodes = field(j, "nodes");
        if (!nodes.is_array() || nodes.empty()) throw SchemaError("tree needs a nonempty nodes list");
        Tree t;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Json& n = nodes[i];
            if (field(n, "id").get<std::size_t>() != i) throw SchemaError("node ids must be 0..n-1 in order");
            t.add_node(std::nullopt, payload_from_json(field(n, "payload")), n.value("frontier", false), n.value("limit", false));
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Json& p = field(nodes[i], "parent");
            if (p.is_null()) continue;
            const auto parent = p.get<NodeId>();
            if (parent >= nodes.size()) throw SchemaError("node " + std::to_string(i) + " has an unknown parent");
            t.set_parent(static_cast<NodeId>(i), parent);
        }
        if (j.contains("families"))
            for (const auto& [key, list] : j.at("families").items()) {
                const auto n = static_cast<NodeId>(std::stoul(key));
                for (const auto& f : list) {
                    const Json& v = field(f, "value");
                    t.add_family(n, SuccFamily{interval_from_json(field(f, "interval")), f.value("rule", std::string("t+{q}")),
                                               Affine{rational_from_json(field(v, "alpha")), rational_from_json(field(v, "beta"))}});
                }
            }
        if (j.contains("labels"))
            for (const auto& [name, f] : j.at("labels").items()) t.labels()[name] = label_from_json(f);
        const TreeReport rep = validate_tree(t);
        if (!rep.ok()) throw SchemaError("invalid tree: " + rep.violations.front());
        return t;
    });
}

Json to_json(const SetFamily& f) {
    if (!f.has_descriptors()) throw SchemaError("only descriptor families have a JSON form");
    Json sets = Json::array();
    for (NodeId n = 0; n < f.tree().size(); ++n) {
        const SetDescriptor& d = f.descriptor(n);
        sets.push_back({{"node", n},
                        {"base", to_json(d.base)},
                        {"constraint", d.constraint ? to_json(*d.constraint) : Json(nullptr)},
                        {"cert", cert_to_json(d.cert)}});
    }
    return {{"sets", sets}};
}

SetFamily set_family_from_json(const Tree& t, const Json& j) {
    return guarded("set family", [&] {
        const Json& sets = field(j, "sets");
        if (sets.size() != t.size()) throw SchemaError("set family needs one set per node");
        std::vector<SetDescriptor> d;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const Json& s = sets[i];
            if (field(s, "node").get<std::size_t>() != i) throw SchemaError("set family nodes must be 0..n-1 in order");
            const Json& c = field(s, "constraint");
            d.push_back({woset_from_json(field(s, "base")), c.is_null() ? std::nullopt : std::optional(interval_from_json(c)),
                         cert_from_json(field(s, "cert"))});
        }
        return SetFamily(t, std::move(d));
    });
}

Json to_json(const Certificate& c) {
    Json sets = Json::array();
    for (const auto& s : c.sets) {
        Json members(s.members);
        if (s.infinity) members.push_back("inf");
        sets.push_back({{"members", members}, {"provenance", s.provenance}});
    }
    return {{"arity", c.arity}, {"sets", sets}};
}

Certificate certificate_from_json(const Json& j) {
    return guarded("certificate", [&] {
        Certificate c;
        c.arity = field(j, "arity").get<std::size_t>();
        if (c.arity != 2 && c.arity != 3) throw SchemaError("certificate arity must be 2 or 3");
        for (const auto& s : field(j, "sets")) {
            CertSet cs;
            cs.infinity = false;
            for (const auto& m : field(s, "members")) {
                if (m.is_string()) {
                    if (m.get<std::string>() != "inf") throw SchemaError("unknown member " + m.dump());
                    cs.infinity = true;
                } else {
                    cs.members.push_back(m.get<NodeId>());
                }
            }
            std::sort(cs.members.begin(), cs.members.end());
            if (s.contains("provenance")) cs.provenance = s.at("provenance").get<std::map<std::string, std::string>>();
            c.sets.push_back(std::move(cs));
        }
        return c;
    });
}

std::string to_dot(const Tree& t) {
    std::ostringstream out;
    out << "digraph tree {\n";
    for (NodeId n = 0; n < t.size(); ++n) {
        const Node& node = t.node(n);
        out << "  n" << n << " [label=\"" << dot_escape(caption(node.payload)) << "\"";
        if (node.frontier) out << ", style=dashed";
        if (node.limit) out << ", shape=box";
        out << "];\n";
    }
    for (NodeId n = 0; n < t.size(); ++n)
        if (const auto p = t.parent(n)) out << "  n" << *p << " -> n" << n << ";\n";
    out << "}\n";
    return out.str();
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

}  // namespace treetop
