#include "ogl/dissimilarity.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace ogl {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("forgetting factor must lie in (0,1)");
  }
}

}  // namespace

ForgettingSchedule ForgettingSchedule::dynamic(double gamma) {
  check_gamma(gamma);
  return {Mode::dynamic, gamma};
}

ForgettingSchedule ForgettingSchedule::parse(std::string_view text) {
  if (text == "stationary") return stationary();
  constexpr std::string_view prefix = "fixed:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string value(text.substr(prefix.size()));
    std::size_t used = 0;
    double gamma = 0.0;
    try {
      gamma = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw std::invalid_argument("bad forgetting factor '" + value + "'");
    }
    return dynamic(gamma);
  }
  throw std::invalid_argument("schedule must be 'stationary' or 'fixed:<gamma>', got '" +
                              std::string(text) + "'");
}

std::string ForgettingSchedule::to_string() const {
  if (mode == Mode::stationary) return "stationary";
  std::ostringstream os;
  os.precision(17);
  os << "fixed:" << fixed_gamma;
  return os.str();
}

double ForgettingSchedule::gamma_at(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("gamma_at: steps are 1-based");
  if (mode == Mode::stationary) return 1.0 / static_cast<double>(k);
  return fixed_gamma;
}

Vector instantaneous_dissimilarity(const DegreeMap& map, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != map.nodes()) {
    throw std::invalid_argument("instantaneous_dissimilarity: signal length mismatch");
  }
  Vector z(static_cast<Eigen::Index>(map.slots()));
  for (std::size_t e = 0; e < map.slots(); ++e) {
    const double diff = x[static_cast<Eigen::Index>(map.head(e))] -
                        x[static_cast<Eigen::Index>(map.tail(e))];
    z[static_cast<Eigen::Index>(e)] = diff * diff;
  }
  return z;
}

DissimilarityState::DissimilarityState(std::size_t slots, ForgettingSchedule schedule)
    : z_run_(Vector::Zero(static_cast<Eigen::Index>(slots))), schedule_(schedule) {
  if (schedule_.mode == ForgettingSchedule::Mode::dynamic) check_gamma(schedule_.fixed_gamma);
}

DissimilarityState::DissimilarityState(Vector z_run, std::uint64_t steps,
                                       ForgettingSchedule schedule)
    : z_run_(std::move(z_run)), k_(steps), schedule_(schedule) {
  if (schedule_.mode == ForgettingSchedule::Mode::dynamic) check_gamma(schedule_.fixed_gamma);
  if ((z_run_.array() < 0.0).any()) {
    throw std::invalid_argument("DissimilarityState: running vector must be nonnegative");
  }
}

void DissimilarityState::update(const Vector& z_bar) {
  if (z_bar.size() != z_run_.size()) {
    throw std::invalid_argument("DissimilarityState::update: length mismatch");
  }
  if ((z_bar.array() < 0.0).any()) {
    throw std::invalid_argument("DissimilarityState::update: negative dissimilarity");
  }
  ++k_;
  if (k_ == 1 && schedule_.mode == ForgettingSchedule::Mode::dynamic) {
    z_run_ = z_bar;
    return;
  }
  const double gamma = schedule_.gamma_at(k_);
  if (gamma == 1.0) {
    z_run_ = z_bar;
  } else {
    z_run_ = (1.0 - gamma) * z_run_ + gamma * z_bar;
  }
}

DissimilarityState DissimilarityState::updated(const Vector& z_bar) const {
  DissimilarityState next = *this;
  next.update(z_bar);
  return next;
}

}  // namespace ogl
