#include <sstream>

#include "slei/sim.hpp"

namespace slei {

using nlohmann::json;

json metrics_to_json(const Metrics& m) {
  json idle = json::object();
  for (const auto& [id, c] : m.idle)
    idle[std::to_string(id)] = {{"travel", c.travel}, {"wait", c.wait}, {"standby", c.standby}};
  return json{{"finished", m.finished},
              {"finish_tick", m.finish_tick},
              {"finish_rate", m.finish_rate},
              {"features_total", m.features_total},
              {"features_collected", m.features_collected},
              {"idle", idle},
              {"total_idle", m.total_idle},
              {"gcs_explorer_meetings", m.gcs_explorer_meetings},
              {"explorer_inspector_meetings", m.explorer_inspector_meetings},
              {"spontaneous_meetings", m.spontaneous_meetings},
              {"bytes_total", m.bytes_total},
              {"bytes_per_meeting", m.bytes_per_meeting},
              {"overlap_rate", m.overlap_rate},
              {"recharges", m.recharges},
              {"min_energy_fraction", m.min_energy_fraction},
              {"energy_positive", m.energy_positive},
              {"bboxes_total", m.bboxes_total},
              {"meetings_per_bbox", m.meetings_per_bbox()},
              {"replans", m.replans},
              {"soei_runs", m.soei_runs},
              {"ticks", m.ticks.size()}};
}

std::string ticks_csv(const Metrics& m) {
  std::ostringstream os;
  os << "tick,undiscovered,fitted,assigned,inspected,collected,active,charging,standby,failed,min_energy_fraction\n";
  for (const auto& t : m.ticks) {
    os << t.tick;
    for (int n : t.feature_status) os << ',' << n;
    os << ',' << t.active << ',' << t.charging << ',' << t.standby << ',' << t.failed << ','
       << t.min_energy_fraction << '\n';
  }
  return os.str();
}

std::string meetings_csv(const Metrics& m) {
  std::ostringstream os;
  os << "id,gcs,explorer,planned,x,y,z,gcs_arrival,explorer_arrival,met,status,gcs_idle\n";
  for (const auto& r : m.meetings) {
    os << r.id << ',' << r.gcs << ',' << r.explorer << ',' << r.planned << ',' << r.location.x << ','
       << r.location.y << ',' << r.location.z << ',' << r.gcs_arrival << ',' << r.explorer_arrival << ',' << r.met
       << ',' << r.status << ',' << r.gcs_idle << '\n';
  }
  return os.str();
}

std::string soei_csv(const Metrics& m) {
  std::ostringstream os;
  os << "tick,explorer,chosen,tau,tau_plus,tau_minus,allocated,used_ga\n";
  for (const auto& r : m.soei) {
    os << r.tick << ',' << r.explorer << ',';
    for (std::size_t i = 0; i < r.chosen.size(); ++i) os << (i ? ";" : "") << r.chosen[i];
    os << ',' << r.tau << ',' << r.tau_plus << ',' << r.tau_minus << ',';
    bool first = true;
    for (const auto& [j, n] : r.allocated) {
      os << (first ? "" : ";") << j << ':' << n;
      first = false;
    }
    os << ',' << (r.used_ga ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace slei
