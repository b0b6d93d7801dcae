#include "gazegrasp/scene.hpp"

#include "json_util.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace gazegrasp {

ContainerKind classify_object(ObjectClass cls) noexcept {
  switch (cls) {
    case ObjectClass::Apple:
    case ObjectClass::Orange:
      return ContainerKind::NonContainer;
    case ObjectClass::Cup:
      return ContainerKind::SmallContainer;
    case ObjectClass::Bowl:
      return ContainerKind::LargeContainer;
    case ObjectClass::Table:
      return ContainerKind::Surface;
  }
  return ContainerKind::NonContainer;
}

std::string_view to_string(ObjectClass cls) noexcept {
  switch (cls) {
    case ObjectClass::Apple: return "Apple";
    case ObjectClass::Orange: return "Orange";
    case ObjectClass::Cup: return "Cup";
    case ObjectClass::Bowl: return "Bowl";
    case ObjectClass::Table: return "Table";
  }
  return "?";
}

std::string_view to_string(ContainerKind kind) noexcept {
  switch (kind) {
    case ContainerKind::NonContainer: return "NonContainer";
    case ContainerKind::SmallContainer: return "SmallContainer";
    case ContainerKind::LargeContainer: return "LargeContainer";
    case ContainerKind::Surface: return "Surface";
  }
  return "?";
}

ObjectClass object_class_from_string(std::string_view name) {
  for (auto cls : kAllObjectClasses)
    if (to_string(cls) == name) return cls;
  throw ParseError("class: unknown object class '" + std::string(name) + "'");
}

ContainerKind container_kind_from_string(std::string_view name) {
  for (auto kind : kAllContainerKinds)
    if (to_string(kind) == name) return kind;
  throw ParseError("unknown container kind '" + std::string(name) + "'");
}

const SceneObject* Scene::find(std::string_view id) const {
  for (const auto& obj : objects)
    if (obj.id == id) return &obj;
  return nullptr;
}

SceneObject* Scene::find(std::string_view id) {
  for (auto& obj : objects)
    if (obj.id == id) return &obj;
  return nullptr;
}

const SceneObject& Scene::at(std::string_view id) const {
  if (const auto* obj = find(id)) return *obj;
  throw DomainError("unknown object id '" + std::string(id) + "'");
}

SceneObject& Scene::at(std::string_view id) {
  if (auto* obj = find(id)) return *obj;
  throw DomainError("unknown object id '" + std::string(id) + "'");
}

const SceneObject& Scene::table() const {
  for (const auto& obj : objects)
    if (obj.cls == ObjectClass::Table) return obj;
  throw ValidationError("scene has no Table");
}

void Scene::validate() const {
  std::set<std::string> ids;
  int tables = 0;
  for (const auto& obj : objects) {
    if (obj.id.empty()) throw ValidationError("object id must be non-empty");
    if (!ids.insert(obj.id).second) throw ValidationError("duplicate object id '" + obj.id + "'");
    if (!(obj.aabb.half_extents.array() > 0.0).all())
      throw ValidationError("object '" + obj.id + "': half_extents must be strictly positive");
    if (!obj.aabb.center.allFinite()) throw ValidationError("object '" + obj.id + "': center must be finite");
    const bool container = holds_contents(obj.kind());
    if (container != obj.contents.has_value())
      throw ValidationError("object '" + obj.id + "': contents must be " +
                            (container ? "a number for containers" : "null for non-containers"));
    if (obj.contents && (*obj.contents < 0.0 || *obj.contents > 1.0))
      throw ValidationError("object '" + obj.id + "': contents must lie in [0,1]");
    if (obj.cls == ObjectClass::Table) ++tables;
  }
  if (tables != 1)
    throw ValidationError(tables == 0 ? "scene is missing a Table object" : "scene has more than one Table object");
  if (std::abs(table().aabb.top() - table_height) > 1e-6)
    throw ValidationError("table_height does not match the top face of the Table object");
}

Scene scene_from_json(const nlohmann::json& doc) {
  using json_util::require;
  Scene scene;
  if (!doc.is_object()) throw ParseError("scene: document must be an object");
  scene.table_height = require<double>(doc, "table_height");
  const auto& objs = json_util::require_field(doc, "objects");
  if (!objs.is_array()) throw ParseError("objects: expected array");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const auto& o = objs[i];
    const std::string where = "objects[" + std::to_string(i) + "]";
    if (!o.is_object()) throw ParseError(where + ": expected object");
    SceneObject obj;
    obj.id = require<std::string>(o, "id", where);
    obj.cls = object_class_from_string(require<std::string>(o, "class", where));
    obj.aabb.center = json_util::require_vec3(o, "center", where);
    obj.aabb.half_extents = json_util::require_vec3(o, "half_extents", where);
    const auto it = o.find("contents");
    if (it != o.end() && !it->is_null()) {
      if (!it->is_number()) throw ParseError(where + ".contents: expected number or null");
      obj.contents = it->get<double>();
    }
    scene.objects.push_back(std::move(obj));
  }
  scene.validate();
  return scene;
}

nlohmann::json scene_to_json(const Scene& scene) {
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& obj : scene.objects) {
    objs.push_back({{"id", obj.id},
                    {"class", to_string(obj.cls)},
                    {"center", json_util::vec3(obj.aabb.center)},
                    {"half_extents", json_util::vec3(obj.aabb.half_extents)},
                    {"contents", obj.contents ? nlohmann::json(*obj.contents) : nlohmann::json(nullptr)}});
  }
  return {{"table_height", scene.table_height}, {"objects", std::move(objs)}};
}

Scene load_scene(std::string_view document) {
  return scene_from_json(json_util::parse(document, "scene"));
}

Scene load_scene_file(const std::filesystem::path& path) {
  return load_scene(json_util::read_file(path));
}

}  // namespace gazegrasp
