#include "opsel/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace opsel
{
    using nlohmann::json;

    namespace
    {
        // Collects structural errors instead of stopping at the first one.
        class Reader
        {
        public:
            std::vector<Violation> errors;

            const json *field(const json &obj, const std::string &path, const char *key, bool required = true)
            {
                if (!obj.is_object())
                {
                    errors.push_back({path, "expected an object"});
                    return nullptr;
                }
                auto it = obj.find(key);
                if (it == obj.end())
                {
                    if (required)
                        errors.push_back({join(path, key), "missing field"});
                    return nullptr;
                }
                return &*it;
            }

            template <class T>
            void number(const json &obj, const std::string &path, const char *key, T &out, bool required = true)
            {
                const json *v = field(obj, path, key, required);
                if (v == nullptr)
                    return;
                if (!v->is_number())
                {
                    errors.push_back({join(path, key), "expected a number"});
                    return;
                }
                if constexpr (std::is_integral_v<T>)
                {
                    if (!v->is_number_integer() || (std::is_unsigned_v<T> && v->is_number_integer() &&
                                                     !v->is_number_unsigned()))
                    {
                        errors.push_back({join(path, key), "expected a non-negative integer"});
                        return;
                    }
                }
                out = v->get<T>();
            }

            void boolean(const json &obj, const std::string &path, const char *key, bool &out, bool required = true)
            {
                const json *v = field(obj, path, key, required);
                if (v == nullptr)
                    return;
                if (!v->is_boolean())
                {
                    errors.push_back({join(path, key), "expected true or false"});
                    return;
                }
                out = v->get<bool>();
            }

            void string(const json &obj, const std::string &path, const char *key, std::string &out,
                        bool required = true)
            {
                const json *v = field(obj, path, key, required);
                if (v == nullptr)
                    return;
                if (!v->is_string())
                {
                    errors.push_back({join(path, key), "expected a string"});
                    return;
                }
                out = v->get<std::string>();
            }

            template <class Enum, class Parse>
            void enumeration(const json &obj, const std::string &path, const char *key, Enum &out, Parse parse,
                             bool required = true)
            {
                std::string text;
                const auto before = errors.size();
                string(obj, path, key, text, required);
                if (errors.size() != before || text.empty())
                    return;
                if (auto e = parse(text))
                    out = *e;
                else
                    errors.push_back({join(path, key), "unknown value \"" + text + "\""});
            }

            static std::string join(const std::string &path, const std::string &key)
            {
                return path.empty() ? key : path + "." + key;
            }
        };

        std::string at(const std::string &path, std::size_t i)
        {
            return path + "[" + std::to_string(i) + "]";
        }

        json weights_to_json(const QosWeights &w)
        {
            return json::array({w.bw, w.jitter, w.delay, w.ber});
        }
    } // namespace

    json to_json(const Scenario &s)
    {
        json j;
        json ops = json::array();
        for (const auto &op : s.operators)
        {
            ops.push_back({
                {"id", op.id},
                {"name", op.name},
                {"technology", std::string(to_string(op.technology))},
                {"capacity_kbps", op.capacity_kbps},
                {"used_kbps", op.used_kbps},
                {"jitter_ms", op.jitter_ms},
                {"delay_ms", op.delay_ms},
                {"ber", op.ber},
                {"sp", op.sp},
                {"cs", op.cs},
                {"w_u", op.w_u},
                {"w_op", op.w_op},
            });
        }
        j["operators"] = std::move(ops);

        json classes = json::array();
        for (const auto &c : s.service_classes)
        {
            classes.push_back({
                {"kind", std::string(to_string(c.service_class.kind))},
                {"qos_weights", weights_to_json(c.service_class.qos_weights)},
                {"jitter_req", c.jitter_req},
                {"delay_req", c.delay_req},
                {"ber_req", c.ber_req},
            });
        }
        j["service_classes"] = std::move(classes);

        json demand = json::object();
        for (auto kind : kAllServiceKinds)
        {
            json row = json::object();
            for (auto tech : kAllTechnologies)
                if (auto r = s.demand.find(kind, tech))
                    row[std::string(to_string(tech))] = *r;
            demand[std::string(to_string(kind))] = std::move(row);
        }
        j["demand"] = std::move(demand);

        j["mean_interarrival_s"] = s.mean_interarrival_s;
        j["mean_service_s"] = s.mean_service_s;
        j["duration_s"] = s.duration_s;
        j["replications"] = s.replications;
        j["base_seed"] = s.base_seed;
        j["cooperation"] = s.cooperation;

        json mix = json::array();
        for (const auto &p : s.profile_mix)
        {
            mix.push_back({
                {"kind", std::string(to_string(p.kind))},
                {"prefs", {{"w_qos", p.prefs.w_qos}, {"w_price", p.prefs.w_price}}},
                {"probability", p.probability},
            });
        }
        j["profile_mix"] = std::move(mix);
        j["home_weights"] = s.home_weights;
        j["pricing"] = std::string(to_string(s.pricing));
        j["snapshot_interval_s"] = s.snapshot_interval_s;
        return j;
    }

    Scenario scenario_from_json(const json &j)
    {
        Reader rd;
        Scenario s;

        if (!j.is_object())
            throw ScenarioError(std::vector<Violation>{{"(root)", "expected a JSON object"}});

        if (const json *ops = rd.field(j, "", "operators"))
        {
            if (!ops->is_array())
                rd.errors.push_back({"operators", "expected an array"});
            else
                for (std::size_t i = 0; i < ops->size(); ++i)
                {
                    const json &o = (*ops)[i];
                    const std::string path = at("operators", i);
                    OperatorNetwork op;
                    op.id = i;
                    rd.number(o, path, "id", op.id, false);
                    rd.string(o, path, "name", op.name, false);
                    if (op.name.empty())
                        op.name = "Op" + std::to_string(i + 1);
                    rd.enumeration(o, path, "technology", op.technology, parse_technology);
                    rd.number(o, path, "capacity_kbps", op.capacity_kbps);
                    rd.number(o, path, "used_kbps", op.used_kbps, false);
                    rd.number(o, path, "jitter_ms", op.jitter_ms);
                    rd.number(o, path, "delay_ms", op.delay_ms);
                    rd.number(o, path, "ber", op.ber);
                    rd.number(o, path, "sp", op.sp);
                    op.cs = op.sp;
                    rd.number(o, path, "cs", op.cs, false);
                    rd.number(o, path, "w_u", op.w_u, false);
                    rd.number(o, path, "w_op", op.w_op, false);
                    s.operators.push_back(std::move(op));
                }
        }

        if (const json *classes = rd.field(j, "", "service_classes"))
        {
            if (!classes->is_array())
                rd.errors.push_back({"service_classes", "expected an array"});
            else
                for (std::size_t i = 0; i < classes->size(); ++i)
                {
                    const json &c = (*classes)[i];
                    const std::string path = at("service_classes", i);
                    ServiceClassSpec spec;
                    rd.enumeration(c, path, "kind", spec.service_class.kind, parse_service_kind);
                    if (const json *w = rd.field(c, path, "qos_weights"))
                    {
                        if (!w->is_array() || w->size() != 4 ||
                            !std::all_of(w->begin(), w->end(), [](const json &x) { return x.is_number(); }))
                            rd.errors.push_back({path + ".qos_weights", "expected 4 numbers [bw, jitter, delay, ber]"});
                        else
                            spec.service_class.qos_weights = {(*w)[0].get<double>(), (*w)[1].get<double>(),
                                                              (*w)[2].get<double>(), (*w)[3].get<double>()};
                    }
                    rd.number(c, path, "jitter_req", spec.jitter_req);
                    rd.number(c, path, "delay_req", spec.delay_req);
                    rd.number(c, path, "ber_req", spec.ber_req);
                    s.service_classes.push_back(spec);
                }
        }

        if (const json *demand = rd.field(j, "", "demand"))
        {
            if (!demand->is_object())
                rd.errors.push_back({"demand", "expected an object keyed by service class"});
            else
                for (const auto &[kname, row] : demand->items())
                {
                    auto kind = parse_service_kind(kname);
                    if (!kind)
                    {
                        rd.errors.push_back({"demand." + kname, "unknown service class"});
                        continue;
                    }
                    if (!row.is_object())
                    {
                        rd.errors.push_back({"demand." + kname, "expected an object keyed by technology"});
                        continue;
                    }
                    for (const auto &[tname, rate] : row.items())
                    {
                        auto tech = parse_technology(tname);
                        if (!tech)
                            rd.errors.push_back({"demand." + kname + "." + tname, "unknown technology"});
                        else if (!rate.is_number())
                            rd.errors.push_back({"demand." + kname + "." + tname, "expected a number"});
                        else
                            s.demand.set(*kind, *tech, rate.get<double>());
                    }
                }
        }

        rd.number(j, "", "mean_interarrival_s", s.mean_interarrival_s);
        rd.number(j, "", "mean_service_s", s.mean_service_s);
        rd.number(j, "", "duration_s", s.duration_s);
        rd.number(j, "", "replications", s.replications);
        rd.number(j, "", "base_seed", s.base_seed);
        rd.boolean(j, "", "cooperation", s.cooperation);

        if (const json *mix = rd.field(j, "", "profile_mix"))
        {
            if (!mix->is_array())
                rd.errors.push_back({"profile_mix", "expected an array"});
            else
                for (std::size_t i = 0; i < mix->size(); ++i)
                {
                    const json &p = (*mix)[i];
                    const std::string path = at("profile_mix", i);
                    ProfileShare share;
                    rd.enumeration(p, path, "kind", share.kind, parse_service_kind);
                    if (const json *prefs = rd.field(p, path, "prefs"))
                    {
                        rd.number(*prefs, path + ".prefs", "w_qos", share.prefs.w_qos);
                        rd.number(*prefs, path + ".prefs", "w_price", share.prefs.w_price);
                    }
                    rd.number(p, path, "probability", share.probability);
                    s.profile_mix.push_back(share);
                }
        }

        if (const json *hw = rd.field(j, "", "home_weights", false))
        {
            if (!hw->is_array() || !std::all_of(hw->begin(), hw->end(), [](const json &x) { return x.is_number(); }))
                rd.errors.push_back({"home_weights", "expected an array of numbers"});
            else
                s.home_weights = hw->get<std::vector<double>>();
        }
        rd.enumeration(j, "", "pricing", s.pricing, parse_pricing_mode, false);
        rd.number(j, "", "snapshot_interval_s", s.snapshot_interval_s, false);

        auto errors = std::move(rd.errors);
        // Invariants are only meaningful once the structure parsed.
        if (errors.empty())
            errors = validate_scenario(s);
        if (!errors.empty())
            throw ScenarioError(std::move(errors));
        return s;
    }

    Scenario load_scenario(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open scenario file " + path.string());
        json j;
        try
        {
            in >> j;
        }
        catch (const json::parse_error &e)
        {
            throw ScenarioError(std::vector<Violation>{{"(file)", std::string("malformed JSON: ") + e.what()}});
        }
        return scenario_from_json(j);
    }

    void save_scenario(const Scenario &s, const std::filesystem::path &path)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write scenario file " + path.string());
        out << to_json(s).dump(2) << '\n';
        if (!out)
            throw std::runtime_error("failed writing " + path.string());
    }
} // namespace opsel
