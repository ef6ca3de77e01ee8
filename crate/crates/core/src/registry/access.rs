use serde::{Deserialize, Serialize};

use crate::model::PersonRef;

/// Ordered so that `Owner > Editor > Viewer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Viewer,
    Editor,
    Owner,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Viewer => "viewer",
            Role::Editor => "editor",
            Role::Owner => "owner",
        }
    }
}

impl std::str::FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "viewer" => Ok(Role::Viewer),
            "editor" => Ok(Role::Editor),
            "owner" => Ok(Role::Owner),
            other => Err(format!("unknown role {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    Global,
    Log { log_id: String },
}

impl Scope {
    fn covers(&self, log_id: &str) -> bool {
        match self {
            Scope::Global => true,
            Scope::Log { log_id: id } => id == log_id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessGrant {
    pub person: PersonRef,
    pub scope: Scope,
    pub role: Role,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentState {
    Open,
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionAssignment {
    pub log_id: String,
    pub section_path: String,
    pub assignee: PersonRef,
    pub state: AssignmentState,
}

/// Contents of `access.json`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessFile {
    pub members: Vec<PersonRef>,
    pub grants: Vec<AccessGrant>,
    pub assignments: Vec<SectionAssignment>,
}

impl AccessFile {
    /// Highest role over every grant that applies, if any.
    pub fn effective_role(&self, person_id: &str, log_id: &str) -> Option<Role> {
        self.grants
            .iter()
            .filter(|g| g.person.id == person_id && g.scope.covers(log_id))
            .map(|g| g.role)
            .max()
    }

    pub fn global_role(&self, person_id: &str) -> Option<Role> {
        self.grants
            .iter()
            .filter(|g| g.person.id == person_id && g.scope == Scope::Global)
            .map(|g| g.role)
            .max()
    }

    pub fn is_member(&self, person_id: &str) -> bool {
        self.members.iter().any(|m| m.id == person_id)
    }

    /// Replaces any grant for the same person and scope.
    pub fn set_grant(&mut self, grant: AccessGrant) {
        self.grants
            .retain(|g| !(g.person.id == grant.person.id && g.scope == grant.scope));
        self.grants.push(grant);
    }

    pub fn owner_of(&self, log_id: &str) -> Option<&PersonRef> {
        self.grants
            .iter()
            .find(|g| g.role == Role::Owner && g.scope == Scope::Log { log_id: log_id.into() })
            .map(|g| &g.person)
    }

    /// Makes `owner` the single owner of `log_id`.
    pub fn set_owner(&mut self, log_id: &str, owner: &PersonRef) {
        let scope = Scope::Log { log_id: log_id.into() };
        self.grants.retain(|g| !(g.scope == scope && g.role == Role::Owner));
        self.set_grant(AccessGrant { person: owner.clone(), scope, role: Role::Owner });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_role_is_the_maximum() {
        let p = PersonRef::new("ana", "Ana");
        let mut access = AccessFile::default();
        access.set_grant(AccessGrant { person: p.clone(), scope: Scope::Global, role: Role::Viewer });
        access.set_grant(AccessGrant {
            person: p.clone(),
            scope: Scope::Log { log_id: "a".into() },
            role: Role::Editor,
        });
        assert_eq!(access.effective_role("ana", "a"), Some(Role::Editor));
        assert_eq!(access.effective_role("ana", "b"), Some(Role::Viewer));
        assert_eq!(access.effective_role("bob", "a"), None);
        assert!(Role::Owner > Role::Editor && Role::Editor > Role::Viewer);
    }

    #[test]
    fn single_owner_per_log() {
        let mut access = AccessFile::default();
        access.set_owner("a", &PersonRef::new("ana", "Ana"));
        access.set_owner("a", &PersonRef::new("bob", "Bob"));
        let owners = access.grants.iter().filter(|g| g.role == Role::Owner).count();
        assert_eq!(owners, 1);
        assert_eq!(access.owner_of("a").unwrap().id, "bob");
    }
}
