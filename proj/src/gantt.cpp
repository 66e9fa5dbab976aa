#include "delaysched/gantt.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "delaysched/validate.hpp"

namespace ds {

namespace {

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                          "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

struct Box {
    int job;
    int machine;
    Rat start, end;
    bool duplicate;
};

std::vector<Box> collect(const Instance& inst, const Schedule& sched) {
    std::vector<Box> boxes;
    for (const auto& [job, ps] : sched.placements) {
        for (const auto& p : ps) {
            Rat end = p.start + Rat(1, inst.machine(p.machine).speed);
            boxes.push_back({job, p.machine, p.start, end, ps.size() > 1});
        }
    }
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
        if (a.machine != b.machine) return a.machine < b.machine;
        if (a.start != b.start) return a.start < b.start;
        return a.job < b.job;
    });
    return boxes;
}

}  // namespace

std::string gantt_svg(const Instance& inst, const Schedule& sched) {
    auto boxes = collect(inst, sched);
    Rat horizon(1);
    for (const auto& b : boxes)
        if (b.end > horizon) horizon = b.end;
    double scale = 900.0 / horizon.to_double();
    const int row_height = 28, row_gap = 8, top = 30, left = 70;
    // lane assignment inside each machine row so concurrent jobs stack
    std::map<int, int> lanes_used;
    std::map<int, std::vector<Rat>> lane_free;
    std::vector<int> lane_of(boxes.size(), 0);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        auto& free = lane_free[boxes[i].machine];
        int lane = -1;
        for (std::size_t q = 0; q < free.size(); ++q)
            if (free[q] <= boxes[i].start) {
                lane = static_cast<int>(q);
                break;
            }
        if (lane < 0) {
            lane = static_cast<int>(free.size());
            free.push_back(Rat(0));
        }
        free[lane] = boxes[i].end;
        lane_of[i] = lane;
        lanes_used[boxes[i].machine] = std::max(lanes_used[boxes[i].machine], lane + 1);
    }
    std::map<int, int> row_top;
    int y = top;
    for (const auto& mach : inst.machines) {
        row_top[mach.id] = y;
        y += std::max(1, lanes_used[mach.id]) * row_height + row_gap;
    }

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (left + 920) << "\" height=\""
       << (y + 20) << "\">\n";
    os << "<defs><pattern id=\"dup\" width=\"6\" height=\"6\" patternTransform=\"rotate(45)\" "
          "patternUnits=\"userSpaceOnUse\"><rect width=\"6\" height=\"6\" fill=\"white\" "
          "fill-opacity=\"0\"/><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"black\" "
          "stroke-opacity=\"0.35\" stroke-width=\"2\"/></pattern></defs>\n";
    for (const auto& mach : inst.machines) {
        int ry = row_top[mach.id];
        int rh = std::max(1, lanes_used[mach.id]) * row_height;
        os << "<text x=\"4\" y=\"" << (ry + rh / 2 + 4) << "\" font-size=\"12\" "
           << "font-family=\"monospace\">m" << mach.id << "</text>\n";
        os << "<line x1=\"" << left << "\" y1=\"" << (ry + rh) << "\" x2=\"" << (left + 900)
           << "\" y2=\"" << (ry + rh) << "\" stroke=\"#ccc\"/>\n";
    }
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const Box& b = boxes[i];
        double x = left + b.start.to_double() * scale;
        double w = (b.end - b.start).to_double() * scale;
        int by = row_top[b.machine] + lane_of[i] * row_height;
        const char* color = kPalette[static_cast<std::size_t>(b.job) % 10];
        os << "<rect x=\"" << x << "\" y=\"" << (by + 2) << "\" width=\"" << w << "\" height=\""
           << (row_height - 4) << "\" fill=\"" << color << "\" stroke=\"#333\"/>\n";
        if (b.duplicate)
            os << "<rect x=\"" << x << "\" y=\"" << (by + 2) << "\" width=\"" << w
               << "\" height=\"" << (row_height - 4) << "\" fill=\"url(#dup)\"/>\n";
        if (w > 14)
            os << "<text x=\"" << (x + w / 2) << "\" y=\"" << (by + row_height / 2 + 4)
               << "\" font-size=\"11\" font-family=\"monospace\" text-anchor=\"middle\">"
               << b.job << "</text>\n";
    }
    // time axis ticks at integers when coarse enough
    long long ticks = horizon.floor();
    long long step = std::max(1LL, ticks / 18);
    for (long long t = 0; t <= ticks; t += step)
        os << "<text x=\"" << (left + t * scale) << "\" y=\"" << (y + 12)
           << "\" font-size=\"10\" font-family=\"monospace\" text-anchor=\"middle\">" << t
           << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string gantt_ascii(const Instance& inst, const Schedule& sched) {
    auto boxes = collect(inst, sched);
    std::ostringstream os;
    for (const auto& mach : inst.machines) {
        os << "m" << mach.id << " |";
        for (const auto& b : boxes)
            if (b.machine == mach.id)
                os << " " << b.start.str() << ":j" << b.job << (b.duplicate ? "*" : "");
        os << "\n";
    }
    os << "(* = duplicated copy)\n";
    return os.str();
}

}  // namespace ds
