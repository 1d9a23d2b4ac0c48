#include "areal/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace areal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::size_t(-1);
}  // namespace

void PiecewiseInitialCondition::validate(const FdParams& params) const {
  if (!(domain_max > domain_min))
    throw DomainError("initial condition: empty domain");
  if (densities.size() != breaks.size() + 1)
    throw DomainError("initial condition: need breaks.size() + 1 densities");
  double prev = domain_min;
  for (const double b : breaks) {
    if (!(b > prev) || !(b < domain_max))
      throw DomainError("initial condition: breakpoints must be strictly increasing inside the domain");
    prev = b;
  }
  for (const double k : densities)
    if (k < 0.0 || k > params.k_jam)
      throw DomainError("initial condition: density outside [0, k_jam]");
}

std::vector<MocSolution::ActiveFront> MocSolution::active_at(double t) const {
  std::vector<ActiveFront> active;
  for (const FrontSegment& s : segments_) {
    if (t < s.t_birth || t >= s.t_death) continue;
    active.push_back({s.x_birth + s.speed * (t - s.t_birth), s.k_left, s.k_right});
  }
  std::sort(active.begin(), active.end(),
            [](const ActiveFront& a, const ActiveFront& b) { return a.x < b.x; });
  return active;
}

double MocSolution::density(double x, double t) const {
  if (t < 0.0 || t > horizon_ + 1e-12)
    throw DomainError("moc sampler: time outside [0, horizon]");
  const std::vector<ActiveFront> active = active_at(t);
  double state = active.empty() ? leftmost_ : active.front().k_left;
  for (const ActiveFront& f : active) {
    if (f.x <= x) state = f.k_right;
    else break;
  }
  return state;
}

double MocSolution::integrate_density(double t, double a, double b) const {
  if (!(b > a)) throw DomainError("moc integrate: need b > a");
  const std::vector<ActiveFront> active = active_at(t);
  double total = 0.0;
  double cursor = a;
  double state = active.empty() ? leftmost_ : active.front().k_left;
  for (const ActiveFront& f : active) {
    if (f.x <= a) {
      state = f.k_right;
      continue;
    }
    if (f.x >= b) break;
    total += state * (f.x - cursor);
    cursor = f.x;
    state = f.k_right;
  }
  total += state * (b - cursor);
  return total;
}

namespace {

struct Front {
  double t0 = 0.0;
  double x0 = 0.0;
  double speed = 0.0;
  double k_left = 0.0;
  double k_right = 0.0;
  bool alive = false;
  std::size_t prev = kNone;
  std::size_t next = kNone;
  std::size_t segment = kNone;
  std::uint64_t stamp = 0;  // bumped when neighbours change; invalidates queued events
};

struct Collision {
  double t;
  std::size_t left, right;
  std::uint64_t stamp_left, stamp_right;
  bool operator>(const Collision& other) const { return t > other.t; }
};

double position_at(const Front& f, double t) { return f.x0 + f.speed * (t - f.t0); }

double collision_time(const Front& a, const Front& b, double now) {
  if (a.speed <= b.speed) return kInf;
  const double xa = position_at(a, now);
  const double xb = position_at(b, now);
  const double gap = xb - xa;
  if (gap < 0.0) return now;  // already touching within rounding
  return now + gap / (a.speed - b.speed);
}

}  // namespace

MocSolution moc_solve(const FdParams& params, const PiecewiseInitialCondition& init,
                      double horizon, const FrontTrackingOptions& options) {
  if (!(horizon > 0.0)) throw DomainError("moc_solve: horizon must be positive");
  if (params.family != FdFamily::smulders && params.family != FdFamily::daganzo)
    throw DomainError("moc_solve: only the two-regime families are supported");
  if (!has_continuous_flux(params))
    throw DomainError("moc_solve: flux is discontinuous at k_crit (free omega); "
                      "method of characteristics needs a single-valued concave flux");
  init.validate(params);

  std::vector<Front> fronts;
  std::vector<FrontSegment> segments;
  std::vector<FrontEvent> events;
  std::priority_queue<Collision, std::vector<Collision>, std::greater<Collision>> queue;

  auto emit = [&](double t, double x, const WaveFan& fan) {
    // Discretize the fan into fronts; returns [first, last] indices or
    // kNone when the fan is empty.
    std::pair<std::size_t, std::size_t> range{kNone, kNone};
    for (const Wave& wave : fan.waves) {
      std::vector<std::pair<double, double>> jumps;  // (k_left, k_right)
      if (wave.kind == Wave::Kind::shock || wave.head == wave.tail) {
        jumps.emplace_back(wave.k_left, wave.k_right);
      } else {
        const int n = std::max(options.n_fan, 1);
        double prev = wave.k_left;
        for (int i = 1; i <= n; ++i) {
          const double next =
              wave.k_left + (wave.k_right - wave.k_left) * double(i) / double(n);
          jumps.emplace_back(prev, next);
          prev = next;
        }
      }
      for (const auto& [kl, kr] : jumps) {
        if (kl == kr) continue;
        Front f;
        f.t0 = t;
        f.x0 = x;
        f.speed = shock_speed(params, kl, kr);
        f.k_left = kl;
        f.k_right = kr;
        f.alive = true;
        f.segment = segments.size();
        segments.push_back({t, x, f.speed, kInf, kl, kr});
        events.push_back({t, x, wave.kind == Wave::Kind::shock ? "shock" : "fan", kl, kr,
                          f.speed});
        fronts.push_back(f);
        const std::size_t id = fronts.size() - 1;
        if (range.first == kNone) range.first = id;
        else {
          fronts[range.second].next = id;
          fronts[id].prev = range.second;
        }
        range.second = id;
      }
    }
    return range;
  };

  auto schedule = [&](std::size_t left, std::size_t right, double now) {
    if (left == kNone || right == kNone) return;
    const double t = collision_time(fronts[left], fronts[right], now);
    if (t <= horizon)
      queue.push({std::max(t, now), left, right, fronts[left].stamp, fronts[right].stamp});
  };

  // Initial Riemann fans at every breakpoint, linked left to right.
  std::size_t tail = kNone;
  for (std::size_t b = 0; b < init.breaks.size(); ++b) {
    const auto range = emit(0.0, init.breaks[b], solve_riemann(params, init.densities[b],
                                                               init.densities[b + 1]));
    if (range.first == kNone) continue;
    if (tail != kNone) {
      fronts[tail].next = range.first;
      fronts[range.first].prev = tail;
    }
    tail = range.second;
  }
  for (std::size_t i = 0; i < fronts.size(); ++i)
    if (fronts[i].next != kNone) schedule(i, fronts[i].next, 0.0);

  std::size_t interactions = 0;
  double now = 0.0;
  while (!queue.empty()) {
    const Collision c = queue.top();
    queue.pop();
    if (c.t > horizon) break;
    const Front& fl = fronts[c.left];
    const Front& fr = fronts[c.right];
    if (!fl.alive || !fr.alive || fl.next != c.right) continue;
    if (c.stamp_left != fl.stamp || c.stamp_right != fr.stamp) continue;

    if (++interactions > options.max_interactions)
      throw FrontTrackingError("moc_solve: interaction cap exceeded", now);
    now = std::max(now, c.t);
    const double x_star = position_at(fl, c.t);

    // Gather every front meeting this point within the tie tolerance.
    std::size_t first = c.left;
    while (fronts[first].prev != kNone) {
      const std::size_t p = fronts[first].prev;
      if (collision_time(fronts[p], fronts[first], now) > c.t + options.tie_tolerance) break;
      first = p;
    }
    std::size_t last = c.right;
    while (fronts[last].next != kNone) {
      const std::size_t nx = fronts[last].next;
      if (collision_time(fronts[last], fronts[nx], now) > c.t + options.tie_tolerance) break;
      last = nx;
    }

    const double k_outer_left = fronts[first].k_left;
    const double k_outer_right = fronts[last].k_right;
    const std::size_t before = fronts[first].prev;
    const std::size_t after = fronts[last].next;

    for (std::size_t i = first;; i = fronts[i].next) {
      fronts[i].alive = false;
      segments[fronts[i].segment].t_death = c.t;
      if (i == last) break;
    }

    events.push_back({c.t, x_star, "interaction", k_outer_left, k_outer_right, 0.0});

    const auto range = emit(c.t, x_star, solve_riemann(params, k_outer_left, k_outer_right));
    std::size_t new_first = range.first, new_last = range.second;
    if (new_first == kNone) {
      // Waves annihilated; relink the neighbours.
      if (before != kNone) fronts[before].next = after;
      if (after != kNone) fronts[after].prev = before;
      if (before != kNone) ++fronts[before].stamp;
      if (after != kNone) ++fronts[after].stamp;
      schedule(before, after, c.t);
      continue;
    }
    fronts[new_first].prev = before;
    fronts[new_last].next = after;
    if (before != kNone) {
      fronts[before].next = new_first;
      ++fronts[before].stamp;
      schedule(before, new_first, c.t);
    }
    if (after != kNone) {
      fronts[after].prev = new_last;
      ++fronts[after].stamp;
      schedule(new_last, after, c.t);
    }
  }

  for (Front& f : fronts)
    if (f.alive) segments[f.segment].t_death = kInf;

  return MocSolution(init.densities.front(), horizon, std::move(segments), std::move(events));
}

}  // namespace areal
