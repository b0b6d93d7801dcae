#pragma once

#include "gazegrasp/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazegrasp {

enum class ObjectClass { Apple, Orange, Cup, Bowl, Table };

enum class ContainerKind { NonContainer, SmallContainer, LargeContainer, Surface };

inline constexpr ObjectClass kAllObjectClasses[] = {ObjectClass::Apple, ObjectClass::Orange, ObjectClass::Cup,
                                                    ObjectClass::Bowl, ObjectClass::Table};
inline constexpr ContainerKind kAllContainerKinds[] = {ContainerKind::NonContainer, ContainerKind::SmallContainer,
                                                       ContainerKind::LargeContainer, ContainerKind::Surface};

ContainerKind classify_object(ObjectClass cls) noexcept;

constexpr bool is_graspable(ContainerKind kind) noexcept {
  return kind == ContainerKind::NonContainer || kind == ContainerKind::SmallContainer;
}
constexpr bool holds_contents(ContainerKind kind) noexcept {
  return kind == ContainerKind::SmallContainer || kind == ContainerKind::LargeContainer;
}

std::string_view to_string(ObjectClass cls) noexcept;
std::string_view to_string(ContainerKind kind) noexcept;
ObjectClass object_class_from_string(std::string_view name);  // throws ParseError
ContainerKind container_kind_from_string(std::string_view name);  // throws ParseError

struct SceneObject {
  std::string id;
  ObjectClass cls = ObjectClass::Apple;
  Aabb aabb;
  std::optional<double> contents;  // fill fraction, containers only

  ContainerKind kind() const noexcept { return classify_object(cls); }
  bool graspable() const noexcept { return is_graspable(kind()); }
};

struct Scene {
  std::vector<SceneObject> objects;
  double table_height = 0.0;

  const SceneObject* find(std::string_view id) const;
  SceneObject* find(std::string_view id);
  const SceneObject& at(std::string_view id) const;  // throws DomainError
  SceneObject& at(std::string_view id);
  const SceneObject& table() const;

  // Throws ValidationError on any broken invariant.
  void validate() const;
};

Scene scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const Scene& scene);
Scene load_scene(std::string_view document);
Scene load_scene_file(const std::filesystem::path& path);

}  // namespace gazegrasp
