#include "cq/schedule.hpp"

#include <cmath>
#include <sstream>

namespace cq {

double Schedule::at(int n) const {
    if (n < 0) throw std::invalid_argument("Schedule: negative index");
    switch (kind_) {
        case Kind::Constant:
            return param_;
        case Kind::Harmonic:
            return 1.0 - 1.0 / (n + 2.0);
        case Kind::Reciprocal:
            return 1.0 / (n + 2.0);
        case Kind::GeoToOne:
            return 1.0 - std::pow(param_, n + 1);
        case Kind::GeoToZero:
            return std::pow(param_, n + 1);
        case Kind::Unset:
            break;
    }
    throw std::logic_error("Schedule: value requested from unset schedule");
}

Schedule Schedule::parse(const std::string& text) {
    std::string name = text;
    double param = 0.0;
    bool has_param = false;
    if (auto pos = text.find(':'); pos != std::string::npos) {
        name = text.substr(0, pos);
        std::string rest = text.substr(pos + 1);
        std::size_t used = 0;
        try {
            param = std::stod(rest, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("Schedule: bad parameter in '" + text + "'");
        }
        if (used != rest.size())
            throw std::invalid_argument("Schedule: bad parameter in '" + text + "'");
        has_param = true;
    }
    auto need_param = [&](bool want) {
        if (want != has_param)
            throw std::invalid_argument("Schedule: '" + name +
                                        (want ? "' needs a parameter" : "' takes no parameter"));
    };
    if (name == "const") {
        need_param(true);
        return constant(param);
    }
    if (name == "harmonic") {
        need_param(false);
        return harmonic();
    }
    if (name == "reciprocal") {
        need_param(false);
        return reciprocal();
    }
    if (name == "geo_to_one") {
        need_param(true);
        if (!(param > 0.0 && param < 1.0))
            throw std::invalid_argument("Schedule: geo_to_one ratio must be in (0,1)");
        return geo_to_one(param);
    }
    if (name == "geo_to_zero") {
        need_param(true);
        if (!(param > 0.0 && param < 1.0))
            throw std::invalid_argument("Schedule: geo_to_zero ratio must be in (0,1)");
        return geo_to_zero(param);
    }
    throw std::invalid_argument("Schedule: unknown name '" + name + "'");
}

std::string Schedule::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Constant:
            os << "const:" << param_;
            break;
        case Kind::Harmonic:
            os << "harmonic";
            break;
        case Kind::Reciprocal:
            os << "reciprocal";
            break;
        case Kind::GeoToOne:
            os << "geo_to_one:" << param_;
            break;
        case Kind::GeoToZero:
            os << "geo_to_zero:" << param_;
            break;
        case Kind::Unset:
            os << "unset";
            break;
    }
    return os.str();
}

}  // namespace cq
