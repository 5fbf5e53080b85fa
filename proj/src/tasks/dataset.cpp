/*
 * Copyright 2026 The Navbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tasks/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "sim/sensing.hpp"
#include "tasks/instructions.hpp"

namespace navbench {
namespace fs = std::filesystem;
namespace {

constexpr int kMaxChainDraws = 20;

std::string pad3(int k) {
  std::string s = std::to_string(k);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

std::string uncapitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

bool wants(const DatasetParams& p, TaskType t) {
  return std::find(p.tasks.begin(), p.tasks.end(), t) != p.tasks.end();
}

// Everything one scene contributes, grouped so a family can be held out for
// val_seen as a unit.
struct SceneOutput {
  std::vector<std::vector<Episode>> families;
  std::vector<std::string> log;
  std::vector<std::string> skipped;
};

// Small scenes cannot always host every family (few objects, short
// distances). Drop the family and say why rather than failing the dataset.
template <typename Fn>
void or_skip(SceneOutput& out, const std::string& family_id, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSamplingExhausted) throw;
    out.skipped.push_back(family_id + ": " + e.what());
  }
}

RefinementContext refinement_context(const SceneContext& ctx, const ObjectSpec& target, const PlannedPath& path) {
  RefinementContext rc;
  rc.prior = describe_target(target, ctx.graph(), ctx.scene());
  SensorConfig sensor;
  for (std::size_t i = 0; i < path.waypoints.size(); i += 20) {
    Pose p = make_pose(path.waypoints[i], 0.0);
    for (const auto& d : detect_objects(ctx, p, sensor)) {
      if (std::find(rc.seen_along_path.begin(), rc.seen_along_path.end(), d.label) == rc.seen_along_path.end()) {
        rc.seen_along_path.push_back(d.label);
      }
    }
  }
  return rc;
}

SceneOutput generate_for_scene(const SceneContext& ctx, const DatasetParams& p) {
  SceneOutput out;
  const std::string& sid = ctx.scene().scene_id;
  Rng rng(mix_seed(p.seed, hash_string(sid)));

  if (wants(p, TaskType::kFine)) {
    for (int k = 0; k < p.fine_per_scene; ++k) {
      const std::string id = sid + "_fine_" + pad3(k);
      or_skip(out, id, [&] {
        const PathSample s = sample_path(ctx, p.constraints, rng.next());
        out.families.push_back({make_fine_episode(ctx, s, id, p.success_thresh)});
      });
    }
  }

  const bool coarse_family =
      wants(p, TaskType::kCoarse) || wants(p, TaskType::kVisualRef) || wants(p, TaskType::kDialogue);
  if (coarse_family) {
    for (int k = 0; k < p.coarse_per_scene; ++k) {
      std::optional<PathSample> sampled;
      or_skip(out, sid + "_coarse_family_" + pad3(k),
              [&] { sampled = sample_object_path(ctx, p.constraints, rng.next()); });
      if (!sampled) continue;
      const PathSample& s = *sampled;
      std::vector<Episode> family;
      std::optional<CoarseInstructions> refined;
      for (TaskType t : {TaskType::kCoarse, TaskType::kVisualRef, TaskType::kDialogue}) {
        if (!wants(p, t)) continue;
        Episode e = make_coarse_family_episode(ctx, s, t, sid + "_" + std::string(task_type_name(t)) + "_" + pad3(k),
                                               p.success_thresh);
        if (!p.clients.empty()) {
          // One refinement per trajectory so the three tasks keep identical text.
          if (!refined) {
            const ObjectSpec* target = ctx.scene().find_object(*s.target_object_id);
            auto r = refine(e.instructions, refinement_context(ctx, *target, s.path), p.clients);
            for (auto& line : r.log) out.log.push_back(e.episode_id + ": " + line);
            refined = r.bundle.coarse;
          }
          e.instructions.coarse = refined;
        }
        family.push_back(std::move(e));
      }
      out.families.push_back(std::move(family));
    }
  }

  if (wants(p, TaskType::kLongHorizon)) {
    for (int k = 0; k < p.long_horizon_per_scene; ++k) {
      const std::string id = sid + "_long_horizon_" + pad3(k);
      const int legs = rng.bernoulli(0.5) ? 2 : 3;
      std::vector<Episode> parts;
      or_skip(out, id, [&] {
        // A later leg can dead-end when nothing lies in the geodesic band
        // from the previous goal; redraw the whole chain then.
        for (int chain = 0; static_cast<int>(parts.size()) < legs; ++chain) {
          if (chain == kMaxChainDraws) {
            throw Error(ErrorCode::kSamplingExhausted, "no " + std::to_string(legs) + "-goal chain within " +
                                                           std::to_string(kMaxChainDraws) + " draws");
          }
          parts.clear();
          std::optional<WorldPoint> from;
          for (int leg = 0; leg < legs; ++leg) {
            std::optional<PathSample> s;
            try {
              s = sample_object_path(ctx, p.constraints, rng.next(), from);
            } catch (const Error& e) {
              if (e.code() != ErrorCode::kSamplingExhausted || !from) throw;
              break;
            }
            parts.push_back(make_coarse_family_episode(ctx, *s, TaskType::kCoarse, "leg", p.success_thresh));
            from = s->goal;
          }
        }
        out.families.push_back({chain_long_horizon(ctx, parts, id)});
      });
    }
  }
  return out;
}

Json params_to_json(const DatasetParams& p) {
  Json tasks = Json::array();
  for (TaskType t : p.tasks) tasks.push_back(std::string(task_type_name(t)));
  return Json{{"fine_per_scene", p.fine_per_scene},
              {"coarse_per_scene", p.coarse_per_scene},
              {"long_horizon_per_scene", p.long_horizon_per_scene},
              {"tasks", tasks},
              {"min_geodesic", p.constraints.min_geodesic},
              {"max_geodesic", p.constraints.max_geodesic},
              {"max_tries", p.constraints.max_tries},
              {"success_thresh", p.success_thresh},
              {"split_ratios", p.split_ratios},
              {"val_seen_fraction", p.val_seen_fraction}};
}

Json navigation_to_json(const NavigationParams& n) {
  return Json{{"resolution", n.resolution}, {"planning_margin", n.margin()}};
}

NavigationParams navigation_from_json(const JsonReader& j) {
  NavigationParams n;
  n.resolution = j.field("resolution").number();
  n.planning_margin = j.field("planning_margin").number();
  return n;
}

}  // namespace

Json agent_to_json(const AgentBody& a) {
  return Json{{"radius", a.radius},
              {"height", a.height},
              {"max_linear_speed", a.max_linear_speed},
              {"max_angular_speed", a.max_angular_speed}};
}

AgentBody agent_from_json(const JsonReader& j) {
  AgentBody a;
  a.radius = j.field("radius").number();
  a.height = j.field("height").number();
  a.max_linear_speed = j.field("max_linear_speed").number();
  a.max_angular_speed = j.field("max_angular_speed").number();
  a.validate();
  return a;
}

GoalSnapshot capture_goal_snapshot(const SceneContext& ctx, const PlannedPath& path) {
  const auto& w = path.waypoints;
  double yaw = 0.0;
  for (std::size_t i = w.size(); i-- > 1;) {
    const WorldPoint d = w.back() - w[i - 1];
    if (norm(d) > 1e-9) {
      yaw = std::atan2(d.y, d.x);
      break;
    }
  }
  GoalSnapshot snap;
  snap.captured_at = make_pose(w.back(), yaw);
  for (const auto& d : detect_objects(ctx, snap.captured_at, SensorConfig{})) {
    snap.visible.push_back({d.label, d.bearing, d.range});
  }
  return snap;
}

Episode make_fine_episode(const SceneContext& ctx, const PathSample& sample, std::string episode_id,
                          double success_thresh) {
  Episode e;
  e.episode_id = std::move(episode_id);
  e.scene_id = ctx.scene().scene_id;
  e.task_type = TaskType::kFine;
  e.instructions.fine = make_fine_instruction(sample.path, ctx.graph(), ctx.scene());
  e.start = sample.start;
  e.goals = {Goal{sample.goal, sample.target_object_id}};
  e.reference_path = sample.path;
  e.success_thresh = success_thresh;
  return e;
}

Episode make_coarse_family_episode(const SceneContext& ctx, const PathSample& sample, TaskType type,
                                   std::string episode_id, double success_thresh) {
  if (!sample.target_object_id) throw Error(ErrorCode::kInvalidArgument, "coarse episodes need a target object");
  const ObjectSpec* target = ctx.scene().find_object(*sample.target_object_id);
  if (!target) throw Error(ErrorCode::kInvalidArgument, "unknown target '" + *sample.target_object_id + "'");
  Episode e;
  e.episode_id = std::move(episode_id);
  e.scene_id = ctx.scene().scene_id;
  e.task_type = type;
  e.instructions.coarse = make_coarse_instructions(*target, ctx.graph(), ctx.scene());
  if (type == TaskType::kVisualRef) e.instructions.goal_snapshot = capture_goal_snapshot(ctx, sample.path);
  e.instructions.oracle_enabled = type == TaskType::kDialogue;
  e.start = sample.start;
  e.goals = {Goal{sample.goal, sample.target_object_id}};
  e.reference_path = sample.path;
  e.success_thresh = success_thresh;
  validate_bundle(type, e.instructions);
  return e;
}

Episode chain_long_horizon(const SceneContext& ctx, const std::vector<Episode>& legs, std::string episode_id) {
  if (legs.size() < 2 || legs.size() > 3) throw Error(ErrorCode::kInvalidArgument, "long-horizon chains need 2-3 legs");
  static const char* kOrdinals2[] = {"First", "Finally"};
  static const char* kOrdinals3[] = {"First", "Then", "Finally"};
  Episode e;
  e.episode_id = std::move(episode_id);
  e.scene_id = legs.front().scene_id;
  e.task_type = TaskType::kLongHorizon;
  e.start = legs.front().start;
  e.success_thresh = legs.front().success_thresh;
  std::vector<std::string> subs;
  WorldPoint from = e.start.position();
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const Episode& leg = legs[i];
    if (leg.scene_id != e.scene_id) throw Error(ErrorCode::kInvalidArgument, "long-horizon legs span scenes");
    if (leg.goals.size() != 1) throw Error(ErrorCode::kInvalidArgument, "long-horizon legs must have one goal");
    const Goal& g = leg.goals.front();
    auto path = astar(ctx.nav_grid(), from, g.point);
    if (!path) throw Error(ErrorCode::kUnreachable, "leg " + std::to_string(i + 1) + " of '" + e.episode_id + "' has no path");
    auto& wp = e.reference_path.waypoints;
    wp.insert(wp.end(), path->waypoints.begin() + (wp.empty() ? 0 : 1), path->waypoints.end());
    e.goals.push_back(g);
    std::string text;
    if (leg.instructions.coarse) {
      text = leg.instructions.coarse->formal;
    } else if (leg.instructions.fine) {
      text = *leg.instructions.fine;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "long-horizon leg has no instruction text");
    }
    const char* ordinal = legs.size() == 2 ? kOrdinals2[i] : kOrdinals3[i];
    subs.push_back(std::string(ordinal) + ", " + uncapitalize(text));
    from = g.point;
  }
  e.reference_path.length = polyline_length(e.reference_path.waypoints);
  e.instructions.sub_instructions = std::move(subs);
  validate_bundle(e.task_type, e.instructions);
  return e;
}

void DatasetParams::validate() const {
  if (fine_per_scene < 0 || coarse_per_scene < 0 || long_horizon_per_scene < 0) {
    throw Error(ErrorCode::kInvalidArgument, "per-scene counts must be >= 0");
  }
  if (tasks.empty()) throw Error(ErrorCode::kInvalidArgument, "no task types selected");
  if (std::any_of(split_ratios.begin(), split_ratios.end(), [](int r) { return r <= 0; })) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must be positive");
  }
  if (!(val_seen_fraction >= 0.0 && val_seen_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "val_seen_fraction must lie in [0, 1)");
  }
  if (threads < 1) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1");
  if (!(success_thresh > 0.0)) throw Error(ErrorCode::kInvalidArgument, "success_thresh must be > 0");
  constraints.validate();
}

std::array<int, 3> split_scene_counts(int n, const std::array<int, 3>& ratios) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "at least 3 scenes are needed for the splits");
  const double total = static_cast<double>(ratios[0] + ratios[1] + ratios[2]);
  int val = std::max(1, static_cast<int>(std::lround(n * ratios[1] / total)));
  int test = std::max(1, static_cast<int>(std::lround(n * ratios[2] / total)));
  while (n - val - test < 1) {
    if (test >= val && test > 1) {
      --test;
    } else {
      --val;
    }
  }
  return {n - val - test, val, test};
}

Dataset build_dataset(const std::vector<SceneContextPtr>& scenes, const DatasetParams& params) {
  params.validate();
  std::vector<SceneContextPtr> sorted = scenes;
  std::sort(sorted.begin(), sorted.end(),
            [](const SceneContextPtr& a, const SceneContextPtr& b) { return a->scene().scene_id < b->scene().scene_id; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->scene().scene_id == sorted[i - 1]->scene().scene_id) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate scene_id '" + sorted[i]->scene().scene_id + "'");
    }
  }
  const auto counts = split_scene_counts(static_cast<int>(sorted.size()), params.split_ratios);

  // Scene-level split from a dedicated stream.
  std::vector<std::size_t> order(sorted.size());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(mix_seed(params.seed, hash_string("splits")));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(split_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  std::vector<int> scene_split(sorted.size());  // 0 train, 1 val_unseen, 2 test
  for (std::size_t k = 0; k < order.size(); ++k) {
    scene_split[order[k]] = k < static_cast<std::size_t>(counts[0]) ? 0 : k < static_cast<std::size_t>(counts[0] + counts[1]) ? 1 : 2;
  }

  std::vector<SceneOutput> outputs(sorted.size());
  std::vector<std::string> errors(sorted.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < sorted.size();) {
      try {
        outputs[i] = generate_for_scene(*sorted[i], params);
      } catch (const Error& e) {
        errors[i] = std::string(error_code_name(e.code())) + "\n" + e.what();
      }
    }
  };
  const int nthreads = std::min<int>(params.threads, static_cast<int>(sorted.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i].empty()) continue;
    const auto nl = errors[i].find('\n');
    const std::string name = errors[i].substr(0, nl);
    ErrorCode code = ErrorCode::kInternal;
    for (int c = 1; c <= static_cast<int>(ErrorCode::kInternal); ++c) {
      if (error_code_name(static_cast<ErrorCode>(c)) == name) code = static_cast<ErrorCode>(c);
    }
    throw Error(code, "scene '" + sorted[i]->scene().scene_id + "': " + errors[i].substr(nl + 1));
  }

  Dataset ds;
  for (const char* name : kSplitNames) {
    ds.splits.push_back({name, {}, {}});
    ds.episodes[name];
  }
  auto add = [&](int split, const std::string& scene_id, const Episode& e) {
    SplitInfo& info = ds.splits[static_cast<std::size_t>(split)];
    if (info.scene_ids.empty() || info.scene_ids.back() != scene_id) info.scene_ids.push_back(scene_id);
    info.episode_ids.push_back(e.episode_id);
    ds.episodes[info.name].push_back(e);
  };
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::string& sid = sorted[i]->scene().scene_id;
    auto& fams = outputs[i].families;
    for (auto& line : outputs[i].log) ds.refinement_log.push_back(line);
    for (auto& line : outputs[i].skipped) ds.skipped.push_back(line);
    // Split index in kSplitNames: train 0, val_seen 1, val_unseen 2, test 3.
    const int target = scene_split[i] == 0 ? 0 : scene_split[i] == 1 ? 2 : 3;
    // Held-out families: the last ones of each task group in train scenes.
    std::vector<bool> held(fams.size(), false);
    if (target == 0) {
      std::map<std::string, std::vector<std::size_t>> groups;
      for (std::size_t f = 0; f < fams.size(); ++f) groups[std::string(task_type_name(fams[f].front().task_type))].push_back(f);
      for (auto& [_, idx] : groups) {
        if (idx.size() < 2 || params.val_seen_fraction <= 0.0) continue;
        const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(idx.size() * params.val_seen_fraction)));
        for (std::size_t h = 0; h < n && h < idx.size() - 1; ++h) held[idx[idx.size() - 1 - h]] = true;
      }
    }
    for (std::size_t f = 0; f < fams.size(); ++f) {
      if (held[f]) continue;
      for (const auto& e : fams[f]) add(target, sid, e);
    }
    for (std::size_t f = 0; f < fams.size(); ++f) {
      if (!held[f]) continue;
      for (const auto& e : fams[f]) add(1, sid, e);
    }
  }

  Json manifest;
  manifest["generator_version"] = kGeneratorVersion;
  manifest["seed"] = params.seed;
  manifest["params"] = params_to_json(params);
  if (!sorted.empty()) {
    manifest["agent"] = agent_to_json(sorted.front()->agent());
    manifest["navigation"] = navigation_to_json(sorted.front()->nav_params());
  }
  Json scene_files = Json::object();
  for (const auto& s : sorted) scene_files[s->scene().scene_id] = "scenes/" + s->scene().scene_id + ".json";
  manifest["scenes"] = scene_files;
  manifest["skipped"] = ds.skipped;
  Json splits = Json::array();
  std::map<std::string, int> per_type;
  Json reviews = Json::object();
  for (const auto& info : ds.splits) {
    splits.push_back({{"name", info.name}, {"file", info.name + ".jsonl"}, {"scene_ids", info.scene_ids},
                      {"episode_ids", info.episode_ids}});
    for (const auto& e : ds.episodes[info.name]) {
      ++per_type[std::string(task_type_name(e.task_type))];
      reviews[e.episode_id] = {{"verified", false}, {"score", nullptr}};
    }
  }
  manifest["splits"] = splits;
  Json type_counts = Json::object();
  for (TaskType t : kAllTaskTypes) type_counts[std::string(task_type_name(t))] = per_type[std::string(task_type_name(t))];
  manifest["episode_counts"] = type_counts;
  // One coarse episode stores its three styles together; counting each style
  // as its own episode would multiply the coarse count by this factor.
  manifest["coarse_style_expansion_factor"] = 3;
  manifest["reviews"] = reviews;
  ds.manifest = std::move(manifest);
  return ds;
}

void write_dataset(const Dataset& dataset, const std::vector<SceneContextPtr>& scenes, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "scenes");
  for (const auto& s : scenes) save_scene(s->scene(), (fs::path(dir) / "scenes" / (s->scene().scene_id + ".json")).string());
  for (const auto& info : dataset.splits) {
    write_text_file((fs::path(dir) / (info.name + ".jsonl")).string(), episodes_to_jsonl(dataset.episodes.at(info.name)));
  }
  write_text_file((fs::path(dir) / "manifest.json").string(), dataset.manifest.dump(2) + "\n");
}

const Episode* LoadedDataset::find(const std::string& episode_id) const {
  auto it = std::lower_bound(episodes.begin(), episodes.end(), episode_id,
                             [](const Episode& e, const std::string& id) { return e.episode_id < id; });
  return it != episodes.end() && it->episode_id == episode_id ? &*it : nullptr;
}

SceneContextPtr LoadedDataset::scene_for(const Episode& e) const {
  auto it = scenes.find(e.scene_id);
  if (it == scenes.end()) throw Error(ErrorCode::kInvalidEpisode, "episode '" + e.episode_id + "' references unknown scene '" + e.scene_id + "'");
  return it->second;
}

void write_scene_dir(const std::vector<Scene>& scenes, const GeneratorParams& params, std::uint64_t seed,
                     const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, dir + ": " + ec.message());
  Json ids = Json::array();
  for (const Scene& s : scenes) {
    save_scene(s, (fs::path(dir) / (s.scene_id + ".json")).string());
    ids.push_back(s.scene_id);
  }
  const Json index{{"generator_version", kGeneratorVersion},
                   {"seed", seed},
                   {"agent", agent_to_json(params.agent)},
                   {"navigation", navigation_to_json(params.nav)},
                   {"scenes", ids}};
  write_text_file((fs::path(dir) / "index.json").string(), index.dump(2) + "\n");
}

std::vector<SceneContextPtr> load_scene_dir(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIoError, dir + ": not a directory");
  const fs::path index_path = fs::path(dir) / "index.json";
  std::vector<SceneContextPtr> out;
  if (fs::exists(index_path, ec)) {
    const Json doc = parse_json(read_text_file(index_path.string()), index_path.string());
    const JsonReader j(doc, "");
    try {
      const AgentBody agent = j.has("agent") ? agent_from_json(j.field("agent")) : AgentBody{};
      const NavigationParams nav = j.has("navigation") ? navigation_from_json(j.field("navigation")) : NavigationParams{};
      for (const auto& id : j.field("scenes").array()) {
        out.push_back(make_scene_context(load_scene((fs::path(dir) / (id.string() + ".json")).string()), agent, nav));
      }
    } catch (const Error& e) {
      const std::string msg = e.what();
      if (msg.find(dir) != std::string::npos) throw;
      throw Error(e.code(), index_path.string() + ": " + msg);
    }
  } else {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back(make_scene_context(load_scene(f.string())));
  }
  if (out.empty()) throw Error(ErrorCode::kIoError, dir + ": no scenes");
  std::sort(out.begin(), out.end(), [](const SceneContextPtr& a, const SceneContextPtr& b) {
    return a->scene().scene_id < b->scene().scene_id;
  });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i]->scene().scene_id == out[i - 1]->scene().scene_id) {
      throw Error(ErrorCode::kInvariantViolation, dir + ": duplicate scene_id '" + out[i]->scene().scene_id + "'");
    }
  }
  return out;
}

LoadedDataset load_dataset(const std::string& dir) {
  LoadedDataset ds;
  const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
  ds.manifest = parse_json(read_text_file(manifest_path), manifest_path);
  const JsonReader m(ds.manifest, "");
  try {
    AgentBody agent = m.has("agent") ? agent_from_json(m.field("agent")) : AgentBody{};
    NavigationParams nav;
    if (auto n = m.optional_field("navigation")) nav = navigation_from_json(*n);
    for (const auto& [id, rel] : m.field("scenes").raw().items()) {
      if (!rel.is_string()) m.field("scenes").field(id.c_str()).fail("expected path string");
      Scene scene = load_scene((fs::path(dir) / rel.get<std::string>()).string());
      if (scene.scene_id != id) throw Error(ErrorCode::kInvariantViolation, "scene file for '" + id + "' holds '" + scene.scene_id + "'");
      ds.scenes[id] = make_scene_context(std::move(scene), agent, nav);
    }
    for (const auto& split : m.field("splits").array()) {
      const std::string name = split.field("name").string();
      const std::string file = (fs::path(dir) / split.field("file").string()).string();
      for (auto& e : episodes_from_jsonl(read_text_file(file), file)) {
        if (!ds.scenes.count(e.scene_id)) {
          throw Error(ErrorCode::kInvalidEpisode, file + ": episode '" + e.episode_id + "' references unknown scene");
        }
        if (!ds.split_of.emplace(e.episode_id, name).second) {
          throw Error(ErrorCode::kInvariantViolation, "duplicate episode_id '" + e.episode_id + "'");
        }
        ds.episodes.push_back(std::move(e));
      }
    }
  } catch (const Error& e) {
    // Errors from the split and scene files already name their file.
    const std::string msg = e.what();
    if (msg.find(dir) != std::string::npos) throw;
    throw Error(e.code(), manifest_path + ": " + msg);
  }
  std::sort(ds.episodes.begin(), ds.episodes.end(),
            [](const Episode& a, const Episode& b) { return a.episode_id < b.episode_id; });
  return ds;
}

int import_reviews(const std::string& dataset_dir, const std::string& csv_path) {
  const std::string manifest_path = (fs::path(dataset_dir) / "manifest.json").string();
  Json manifest = parse_json(read_text_file(manifest_path), manifest_path);
  if (!manifest.contains("reviews") || !manifest["reviews"].is_object()) {
    throw Error(ErrorCode::kParseError, manifest_path + ": missing 'reviews' object");
  }
  std::istringstream in(read_text_file(csv_path));
  std::string line;
  if (!std::getline(in, line) || (line.rfind("episode_id,score", 0) != 0)) {
    throw Error(ErrorCode::kParseError, csv_path + ":1: expected header 'episode_id,score[,verified]'");
  }
  int applied = 0, line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    const std::string where = csv_path + ":" + std::to_string(line_no);
    if (cols.size() < 2 || cols.size() > 3) throw Error(ErrorCode::kParseError, where + ": expected 2 or 3 columns");
    if (!manifest["reviews"].contains(cols[0])) throw Error(ErrorCode::kUnknownEpisode, where + ": unknown episode '" + cols[0] + "'");
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(cols[1], &used);
      if (used != cols[1].size() || !std::isfinite(score)) throw std::invalid_argument("x");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, where + ": score is not a number");
    }
    bool verified = true;
    if (cols.size() == 3) {
      if (cols[2] != "true" && cols[2] != "false") throw Error(ErrorCode::kParseError, where + ": verified must be true/false");
      verified = cols[2] == "true";
    }
    manifest["reviews"][cols[0]] = {{"verified", verified}, {"score", score}};
    ++applied;
  }
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  return applied;
}

}  // namespace navbench
