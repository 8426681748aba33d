#include "caseq/error.hpp"
#include "caseq/io.hpp"
#include "caseq/rachsim.hpp"

#include "json.hpp"

#include <cmath>

namespace caseq::rachsim {

using nlohmann::json;

ChannelProfile parse_profile(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("channel profile does not parse: ") + e.what());
    }
    if (!j.is_object() || !j.contains("taps") || !j["taps"].is_array())
        throw FormatError("channel profile needs a 'taps' array");
    std::string name = j.value("name", std::string("unnamed"));
    bool normalize = j.value("normalize", true);
    std::vector<Tap> taps;
    for (const auto& t : j["taps"]) {
        if (!t.is_object() || !t.contains("delay_ns") || !t.contains("power_db") ||
            !t["delay_ns"].is_number() || !t["power_db"].is_number())
            throw FormatError("each tap needs numeric 'delay_ns' and 'power_db'");
        taps.push_back({t["delay_ns"].get<double>() * 1e-9,
                        std::pow(10.0, t["power_db"].get<double>() / 10.0)});
    }
    ChannelProfile p = normalize ? ChannelProfile::normalized(name, std::move(taps))
                                 : ChannelProfile{name, std::move(taps)};
    p.validate();
    return p;
}

ChannelProfile load_profile(const std::string& path) { return parse_profile(io::read_text_file(path)); }

std::string profile_to_json(const ChannelProfile& profile) {
    json taps = json::array();
    for (const auto& t : profile.taps)
        taps.push_back({{"delay_ns", t.delay_s * 1e9}, {"power_db", 10.0 * std::log10(t.power)}});
    json j{{"name", profile.name}, {"taps", taps}, {"normalize", true}};
    return j.dump(1) + "\n";
}

}  // namespace caseq::rachsim
